#pragma once

#include <algorithm>
#include <deque>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tapf/assignment.hpp"
#include "tapf/constraints.hpp"
#include "tapf/grid_map.hpp"
#include "tapf/instance.hpp"
#include "tapf/types.hpp"

namespace tapf::testing {

inline GridMap map_from_rows(const std::vector<std::string>& rows) {
  std::string text = "type octile\nheight " + std::to_string(rows.size()) + "\nwidth " +
                     std::to_string(rows.empty() ? 0 : rows[0].size()) + "\nmap\n";
  for (const auto& r : rows) text += r + "\n";
  return parse_map(text);
}

inline std::shared_ptr<const GridGraph> graph_from_rows(const std::vector<std::string>& rows) {
  return std::make_shared<const GridGraph>(map_from_rows(rows));
}

inline TapfInstance make_instance(const std::vector<std::string>& rows, const std::vector<Cell>& starts,
                                  const std::vector<Cell>& targets,
                                  std::vector<std::vector<uint8_t>> eligibility = {}) {
  TapfInstance inst;
  inst.map_path = "gadget.map";
  inst.graph = graph_from_rows(rows);
  for (const Cell& c : starts) inst.starts.push_back(inst.graph->vertex_at(c.row, c.col));
  for (const Cell& c : targets) inst.targets.push_back(inst.graph->vertex_at(c.row, c.col));
  if (eligibility.empty()) {
    eligibility.assign(starts.size(), std::vector<uint8_t>(targets.size(), 1));
  }
  inst.eligibility = std::move(eligibility);
  validate_instance(inst);
  return inst;
}

// 8x8 map with roughly `blocked_pct` percent obstacles, deterministic in seed.
inline GridMap random_map(int width, int height, int blocked_pct, uint64_t seed) {
  std::mt19937_64 rng(seed);
  GridMap map;
  map.width = width;
  map.height = height;
  map.passable.assign(static_cast<size_t>(width) * height, 1);
  for (auto& cell : map.passable) {
    if (static_cast<int>(uniform_below(rng, 100)) < blocked_pct) cell = 0;
  }
  return map;
}

// Every injective row -> column map with its cost, finite ones only, sorted.
inline std::vector<Cost> brute_force_costs(const CostMatrix& m) {
  std::vector<Cost> out;
  std::vector<int> cols(static_cast<size_t>(m.cols()));
  std::iota(cols.begin(), cols.end(), 0);
  std::set<std::vector<int>> seen;
  do {
    std::vector<int> pick(cols.begin(), cols.begin() + m.rows());
    if (!seen.insert(pick).second) continue;
    Cost total = 0;
    bool finite = true;
    for (int i = 0; i < m.rows(); ++i) {
      if (!is_finite(m.at(i, pick[i]))) finite = false;
      total += m.at(i, pick[i]);
    }
    if (finite) out.push_back(total);
  } while (std::next_permutation(cols.begin(), cols.end()));
  std::sort(out.begin(), out.end());
  return out;
}

inline CostMatrix random_matrix(std::mt19937_64& rng, int rows, int cols, int max_cost, int inf_pct) {
  CostMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const bool inf = static_cast<int>(uniform_below(rng, 100)) < inf_pct;
      m.set(i, j, inf ? kInfiniteCost : static_cast<Cost>(uniform_below(rng, max_cost + 1)));
    }
  }
  return m;
}

// Breadth-first search over (vertex, time) layers up to `horizon`; the goal
// counts only when no vertex constraint forbids resting there afterwards.
inline Cost time_expanded_bfs(const GridGraph& g, VertexId start, VertexId goal,
                              const ConstraintSet& cs, int agent, int horizon) {
  int last_goal_block = -1;
  for (const auto& c : cs.for_agent(agent)) {
    if (c.kind == ConstraintKind::kVertex && c.to == goal) last_goal_block = std::max(last_goal_block, c.time);
  }
  if (cs.blocked_vertex(agent, start, 0)) return kInfiniteCost;
  std::vector<VertexId> layer{start};
  for (int t = 0; t <= horizon; ++t) {
    for (VertexId v : layer) {
      if (v == goal && t > last_goal_block) return t;
    }
    std::set<VertexId> next;
    for (VertexId v : layer) {
      std::vector<VertexId> moves(g.neighbors(v));
      moves.push_back(v);
      for (VertexId u : moves) {
        if (cs.blocked_vertex(agent, u, t + 1) || cs.blocked_edge(agent, v, u, t + 1)) continue;
        next.insert(u);
      }
    }
    layer.assign(next.begin(), next.end());
  }
  return kInfiniteCost;
}

}  // namespace tapf::testing
