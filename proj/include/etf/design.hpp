#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "etf/rational.hpp"

namespace etf {

// A collection of equal-size blocks over points {0,...,v-1}.
// When `complete` is set, the design is "all k-subsets of v points" and
// `blocks` may be left empty if materializing them would be too large;
// `block_count` always carries the true number of blocks.
struct BlockDesign {
  unsigned v = 0;
  unsigned k = 0;
  bool complete = false;
  Int block_count = 0;
  std::vector<std::vector<unsigned>> blocks;  // each sorted; list sorted lex

  nlohmann::json to_json() const;
  static BlockDesign from_json(const nlohmann::json& j);
};

}  // namespace etf
