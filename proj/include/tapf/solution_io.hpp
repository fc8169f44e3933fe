#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tapf/instance.hpp"
#include "tapf/types.hpp"

namespace tapf {

struct SolutionFile {
  Cost flowtime = 0;
  Cost lower_bound = 0;
  std::vector<int> targets;
  std::vector<Path> paths;
};

// flowtime F
// lowerbound L
// agent i target j cost T      (then T + 1 lines "row col")
std::string format_solution(const TapfInstance& instance, const SolutionFile& solution);
SolutionFile parse_solution(std::string_view text, const GridGraph& graph);

}  // namespace tapf
