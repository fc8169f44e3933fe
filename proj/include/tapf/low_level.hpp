#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tapf/constraints.hpp"
#include "tapf/grid_map.hpp"
#include "tapf/types.hpp"

namespace tapf {

/// Per-goal true-distance tables (reverse BFS), built once per goal and
/// shared. Lookups are safe from concurrent threads.
class DistanceCache {
 public:
  explicit DistanceCache(std::shared_ptr<const GridGraph> graph) : graph_(std::move(graph)) {}

  // Distance from every cell to `goal`, -1 where unreachable.
  const std::vector<int>& to(VertexId goal) const;
  const GridGraph& graph() const { return *graph_; }

 private:
  std::shared_ptr<const GridGraph> graph_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<VertexId, std::unique_ptr<const std::vector<int>>> tables_;
};

/// Counts conflicts of a single move against a fixed set of other agents'
/// paths, with agents resting at their final vertex forever.
class ConflictCounter {
 public:
  ConflictCounter() = default;
  ConflictCounter(const GridGraph& graph, const std::vector<const Path*>& others);

  // Conflicts incurred by moving from `prev` to `v`, arriving at time t
  // (prev < 0 for the initial placement): agents at v at t, plus agents
  // swapping v -> prev between t-1 and t.
  int count(VertexId prev, VertexId v, int t) const;
  bool empty() const { return timed_.empty() && parked_.empty(); }

 private:
  uint64_t key(VertexId v, int t) const { return static_cast<uint64_t>(t) * cells_ + v; }

  uint64_t cells_ = 0;
  std::unordered_map<uint64_t, int> timed_;
  std::unordered_map<VertexId, std::vector<int>> parked_;  // vertex -> arrival times
  std::unordered_map<uint64_t, int> moves_;                // (t, from) * cells + to
};

struct SearchResult {
  Cost lb = kInfiniteCost;
  Cost cost = kInfiniteCost;
  std::optional<Path> path;

  bool found() const { return path.has_value(); }
};

struct LowLevelQuery {
  const GridGraph& graph;
  const DistanceCache& distances;
  VertexId start;
  VertexId goal;
  const ConstraintSet& constraints;
  int agent;
  const Deadline* deadline = nullptr;
};

/// Time-expanded A* under the agent's constraints. lb == cost == optimum.
SearchResult shortest_path_search(const LowLevelQuery& query);

/// Focal search: OPEN by f, FOCAL = {f <= w * f_min} by accumulated conflicts.
/// lb is f_min when the goal was extracted.
SearchResult focal_search(const LowLevelQuery& query, SuboptimalityFactor w,
                          const ConflictCounter& conflicts);

/// FOCAL-only search over all candidates with f <= w * known_lb, ordered by
/// accumulated conflicts. known_lb must be the constrained optimum.
SearchResult search_with_lb(const LowLevelQuery& query, SuboptimalityFactor w, Cost known_lb,
                            const ConflictCounter& conflicts);

/// Time horizon used by every low-level search: latest constraint time of
/// the agent plus the number of vertices.
int search_horizon(const GridGraph& graph, const ConstraintSet& constraints, int agent);

/// True if `path` starts at start, ends at goal, moves along edges, and
/// respects every constraint of `agent` including resting at the goal.
bool path_satisfies(const GridGraph& graph, const Path& path, VertexId start, VertexId goal,
                    const ConstraintSet& constraints, int agent);

}  // namespace tapf
