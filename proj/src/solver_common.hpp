#pragma once

#include <array>
#include <chrono>
#include <memory>
#include <unordered_map>

#include "tapf/collision.hpp"
#include "tapf/constraints.hpp"

namespace tapf::detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Adds the scope's wall time to `sink`.
class ScopedTimer {
 public:
  explicit ScopedTimer(double& sink) : sink_(sink) {}
  ~ScopedTimer() { sink_ += watch_.seconds(); }
  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;

 private:
  double& sink_;
  Stopwatch watch_;
};

// The two constraints that resolve `collision`, one per agent. Edge
// collisions between t and t + 1 become edge constraints at arrival time t + 1.
inline std::array<Constraint, 2> split_collision(const Collision& collision,
                                                 const std::vector<Path>& paths) {
  if (collision.kind == CollisionKind::kVertex) {
    return {Constraint::vertex(collision.agent_a, collision.vertex, collision.time),
            Constraint::vertex(collision.agent_b, collision.vertex, collision.time)};
  }
  const int t = collision.time;
  const auto& pa = paths[collision.agent_a];
  const auto& pb = paths[collision.agent_b];
  return {Constraint::edge(collision.agent_a, position_at(pa, t), position_at(pa, t + 1), t + 1),
          Constraint::edge(collision.agent_b, position_at(pb, t), position_at(pb, t + 1), t + 1)};
}

// Owns CT nodes that are still in OPEN (or being expanded).
template <typename Node>
class NodePool {
 public:
  Node* adopt(std::unique_ptr<Node> node) {
    Node* raw = node.get();
    nodes_.emplace(raw, std::move(node));
    return raw;
  }
  void release(Node* node) { nodes_.erase(node); }

 private:
  std::unordered_map<Node*, std::unique_ptr<Node>> nodes_;
};

}  // namespace tapf::detail
