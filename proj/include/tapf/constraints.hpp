#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "tapf/grid_map.hpp"

namespace tapf {

enum class ConstraintKind : uint8_t { kVertex, kEdge };

// Vertex constraint (agent, vertex, time): agent may not occupy `to` at `time`.
// Edge constraint (agent, from, to, time): agent may not be at `from` at
// time - 1 and at `to` at `time` (arrival convention, time >= 1).
struct Constraint {
  ConstraintKind kind = ConstraintKind::kVertex;
  int agent = 0;
  VertexId from = -1;
  VertexId to = -1;
  int time = 0;

  static Constraint vertex(int agent, VertexId v, int time) {
    return {ConstraintKind::kVertex, agent, -1, v, time};
  }
  static Constraint edge(int agent, VertexId from, VertexId to, int time) {
    return {ConstraintKind::kEdge, agent, from, to, time};
  }

  bool operator==(const Constraint&) const = default;
};

class ConstraintSet {
 public:
  void add(const Constraint& c);
  bool contains(const Constraint& c) const;

  bool blocked_vertex(int agent, VertexId v, int t) const;
  bool blocked_edge(int agent, VertexId from, VertexId to, int t) const;
  // Largest timestep among the agent's constraints, 0 if none.
  int latest_time(int agent) const;

  const std::vector<Constraint>& for_agent(int agent) const;
  size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

 private:
  std::vector<std::vector<Constraint>> by_agent_;
  size_t size_ = 0;
};

/// Hashed view of one agent's constraints for the low-level inner loop.
class AgentConstraintTable {
 public:
  AgentConstraintTable(const ConstraintSet& set, int agent, int cell_count);

  bool blocks_vertex(VertexId v, int t) const {
    return !vertices_.empty() && vertices_.count(key(v, t)) != 0;
  }
  bool blocks_edge(VertexId from, VertexId to, int t) const {
    return !edges_.empty() && edges_.count(key(from, t) * cells_ + to) != 0;
  }
  int latest_time() const { return latest_; }
  // Earliest arrival time at `goal` after which no vertex constraint forbids
  // resting there forever.
  int earliest_rest_time(VertexId goal) const;

 private:
  uint64_t key(VertexId v, int t) const {
    return static_cast<uint64_t>(t) * cells_ + static_cast<uint64_t>(v);
  }

  uint64_t cells_;
  int latest_ = 0;
  std::unordered_set<uint64_t> vertices_;
  std::unordered_set<uint64_t> edges_;
  std::vector<std::pair<VertexId, int>> vertex_list_;
};

}  // namespace tapf
