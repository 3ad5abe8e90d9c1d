#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace etf {

inline constexpr const char* kToolVersion = "1.0.0";

// One named verdict inside a report. Every numeric claim lives in `data`
// under the check that produced it.
struct CheckResult {
  std::string check;
  bool ok = true;
  nlohmann::json data = nlohmann::json::object();
};

// Aggregated command output. Deterministic by construction: `timing`
// carries exact work counters (subset checks, group orders scanned), never
// wall-clock readings, so equal inputs produce byte-identical reports.
struct ReportEnvelope {
  std::string tool_version = kToolVersion;
  std::string command;
  nlohmann::json inputs = nlohmann::json::object();
  std::vector<CheckResult> results;
  nlohmann::json timing = nlohmann::json::object();

  void add(std::string check, bool ok,
           nlohmann::json data = nlohmann::json::object());
  bool all_ok() const;
  // True when any result carries a "refused": true marker (work was
  // declined on budget or scope grounds rather than failed).
  bool any_refused() const;
  nlohmann::json to_json() const;
};

}  // namespace etf
