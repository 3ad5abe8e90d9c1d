#include "etf/report.hpp"

namespace etf {

void ReportEnvelope::add(std::string check, bool ok, nlohmann::json data) {
  results.push_back(CheckResult{std::move(check), ok, std::move(data)});
}

bool ReportEnvelope::all_ok() const {
  for (const auto& r : results)
    if (!r.ok) return false;
  return true;
}

bool ReportEnvelope::any_refused() const {
  for (const auto& r : results)
    if (r.data.is_object() && r.data.value("refused", false)) return true;
  return false;
}

nlohmann::json ReportEnvelope::to_json() const {
  nlohmann::json res = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json item{{"check", r.check}, {"ok", r.ok}};
    if (r.data.is_object())
      for (const auto& [k, v] : r.data.items()) item[k] = v;
    res.push_back(std::move(item));
  }
  return nlohmann::json{{"tool_version", tool_version},
                        {"command", command},
                        {"inputs", inputs},
                        {"results", std::move(res)},
                        {"timing", timing}};
}

}  // namespace etf
