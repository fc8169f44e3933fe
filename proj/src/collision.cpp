#include "tapf/collision.hpp"

#include <algorithm>
#include <unordered_map>

namespace tapf {

namespace {

int makespan(const std::vector<Path>& paths) {
  int longest = 0;
  for (const auto& p : paths) longest = std::max(longest, static_cast<int>(p.size()) - 1);
  return longest;
}

uint64_t edge_key(VertexId from, VertexId to) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(from)) << 32) | static_cast<uint32_t>(to);
}

}  // namespace

std::optional<Collision> first_collision(const std::vector<Path>& paths) {
  const int n = static_cast<int>(paths.size());
  const int horizon = makespan(paths);
  std::unordered_map<VertexId, int> occupant;
  std::unordered_map<uint64_t, int> mover;
  for (int t = 0; t <= horizon; ++t) {
    std::optional<Collision> best;
    occupant.clear();
    for (int a = 0; a < n; ++a) {
      const VertexId v = position_at(paths[a], t);
      auto [it, inserted] = occupant.emplace(v, a);
      if (inserted) continue;
      // `it->second` is the lowest agent at v so far, so (it->second, a) is
      // the smallest pair involving a; the overall smallest wins.
      Collision c{it->second, a, t, CollisionKind::kVertex, v, v};
      if (!best || std::pair(c.agent_a, c.agent_b) < std::pair(best->agent_a, best->agent_b)) best = c;
    }
    if (best) return best;
    if (t == horizon) break;

    mover.clear();
    for (int a = 0; a < n; ++a) {
      const VertexId from = position_at(paths[a], t);
      const VertexId to = position_at(paths[a], t + 1);
      if (from == to) continue;
      mover.emplace(edge_key(from, to), a);
    }
    for (int a = 0; a < n; ++a) {
      const VertexId from = position_at(paths[a], t);
      const VertexId to = position_at(paths[a], t + 1);
      if (from == to) continue;
      auto it = mover.find(edge_key(to, from));
      if (it == mover.end() || it->second < a) continue;
      Collision c{a, it->second, t, CollisionKind::kEdge, from, to};
      if (!best || std::pair(c.agent_a, c.agent_b) < std::pair(best->agent_a, best->agent_b)) best = c;
    }
    if (best) return best;
  }
  return std::nullopt;
}

int count_collisions(const std::vector<Path>& paths) {
  const int n = static_cast<int>(paths.size());
  const int horizon = makespan(paths);
  int total = 0;
  std::unordered_map<VertexId, int> occupancy;
  std::unordered_map<uint64_t, int> moves;
  for (int t = 0; t <= horizon; ++t) {
    occupancy.clear();
    for (int a = 0; a < n; ++a) total += occupancy[position_at(paths[a], t)]++;
    if (t == horizon) break;
    moves.clear();
    for (int a = 0; a < n; ++a) {
      const VertexId from = position_at(paths[a], t);
      const VertexId to = position_at(paths[a], t + 1);
      if (from == to) continue;
      if (auto it = moves.find(edge_key(to, from)); it != moves.end()) total += it->second;
      ++moves[edge_key(from, to)];
    }
  }
  return total;
}

}  // namespace tapf
