#include "etf/design.hpp"

#include <stdexcept>

namespace etf {

nlohmann::json BlockDesign::to_json() const {
  nlohmann::json bl = nlohmann::json::array();
  for (const auto& b : blocks) {
    nlohmann::json one = nlohmann::json::array();
    for (unsigned x : b) one.push_back(x);
    bl.push_back(std::move(one));
  }
  return nlohmann::json{{"kind", "block_design"},
                        {"v", v},
                        {"k", k},
                        {"complete", complete},
                        {"block_count", int_str(block_count)},
                        {"blocks", std::move(bl)}};
}

BlockDesign BlockDesign::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("v") || !j.contains("k") ||
      !j.contains("blocks"))
    throw std::invalid_argument("block design JSON needs v, k, blocks");
  BlockDesign d;
  d.v = j.at("v").get<unsigned>();
  d.k = j.at("k").get<unsigned>();
  d.complete = j.value("complete", false);
  if (j.contains("block_count"))
    d.block_count = Int(j.at("block_count").get<std::string>());
  for (const auto& b : j.at("blocks")) {
    std::vector<unsigned> one;
    for (const auto& x : b) {
      unsigned u = x.get<unsigned>();
      if (u >= d.v) throw std::invalid_argument("block point out of range");
      one.push_back(u);
    }
    for (size_t i = 1; i < one.size(); ++i)
      if (one[i - 1] >= one[i])
        throw std::invalid_argument("block not strictly sorted");
    if (one.size() != d.k) throw std::invalid_argument("block size != k");
    d.blocks.push_back(std::move(one));
  }
  if (!j.contains("block_count")) d.block_count = Int(d.blocks.size());
  return d;
}

}  // namespace etf
