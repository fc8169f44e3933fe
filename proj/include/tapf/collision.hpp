#pragma once

#include <optional>
#include <vector>

#include "tapf/types.hpp"

namespace tapf {

enum class CollisionKind { kVertex, kEdge };

// Vertex collision: both agents at `vertex` at `time`. Edge collision: the
// agents swap between `time` and `time + 1`; `vertex`/`other_vertex` are
// agent_a's positions at time and time + 1.
struct Collision {
  int agent_a = 0;
  int agent_b = 0;
  int time = 0;
  CollisionKind kind = CollisionKind::kVertex;
  VertexId vertex = -1;
  VertexId other_vertex = -1;

  bool operator==(const Collision&) const = default;
};

// Position at time t with agents resting at their last vertex.
inline VertexId position_at(const Path& path, int t) {
  return t < static_cast<int>(path.size()) ? path[t] : path.back();
}

/// Earliest collision; vertex before edge at equal time, then the
/// lexicographically smallest agent pair.
std::optional<Collision> first_collision(const std::vector<Path>& paths);

/// Number of (pair, timestep) vertex collisions plus (pair, timestep) swaps
/// over the joint makespan.
int count_collisions(const std::vector<Path>& paths);

}  // namespace tapf
