#include "tapf/solution_io.hpp"

#include <sstream>
#include <stdexcept>

namespace tapf {

std::string format_solution(const TapfInstance& instance, const SolutionFile& solution) {
  const auto& graph = *instance.graph;
  std::ostringstream out;
  out << "flowtime " << solution.flowtime << '\n';
  out << "lowerbound " << solution.lower_bound << '\n';
  for (size_t i = 0; i < solution.paths.size(); ++i) {
    const Path& path = solution.paths[i];
    out << "agent " << i << " target " << solution.targets[i] << " cost " << path_cost(path) << '\n';
    for (VertexId v : path) {
      const Cell c = graph.cell_of(v);
      out << c.row << ' ' << c.col << '\n';
    }
  }
  return out.str();
}

SolutionFile parse_solution(std::string_view text, const GridGraph& graph) {
  std::istringstream in{std::string(text)};
  SolutionFile solution;
  std::string key;
  auto fail = [](const std::string& what) { throw std::runtime_error("solution file: " + what); };
  if (!(in >> key >> solution.flowtime) || key != "flowtime") fail("expected 'flowtime F'");
  if (!(in >> key >> solution.lower_bound) || key != "lowerbound") fail("expected 'lowerbound L'");
  while (in >> key) {
    if (key != "agent") fail("expected 'agent i target j cost T'");
    size_t agent = 0;
    int target = 0;
    Cost cost = 0;
    std::string target_kw, cost_kw;
    if (!(in >> agent >> target_kw >> target >> cost_kw >> cost) || target_kw != "target" ||
        cost_kw != "cost" || agent != solution.paths.size() || cost < 0) {
      fail("malformed agent header");
    }
    Path path;
    for (Cost t = 0; t <= cost; ++t) {
      int row = 0;
      int col = 0;
      if (!(in >> row >> col)) fail("truncated path for agent " + std::to_string(agent));
      if (row < 0 || row >= graph.height() || col < 0 || col >= graph.width()) {
        fail("cell outside the map");
      }
      path.push_back(graph.vertex_at(row, col));
    }
    solution.targets.push_back(target);
    solution.paths.push_back(std::move(path));
  }
  return solution;
}

}  // namespace tapf
