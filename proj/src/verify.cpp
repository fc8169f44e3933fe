#include <algorithm>
#include <map>
#include <set>

#include "tapf/collision.hpp"
#include "tapf/verify.hpp"

namespace tapf {

bool Verdict::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

Verdict verify_solution(const TapfInstance& instance, const std::vector<Path>& paths,
                        const std::vector<int>& claimed_targets, const ConstraintSet* constraints) {
  Verdict verdict;
  auto report = [&](ViolationKind kind, int agent, int other, int time, std::string message) {
    verdict.violations.push_back({kind, agent, other, time, std::move(message)});
  };
  const auto& graph = *instance.graph;
  const int n = instance.agent_count();
  if (static_cast<int>(paths.size()) != n || static_cast<int>(claimed_targets.size()) != n) {
    report(ViolationKind::kWrongAgentCount, -1, -1, -1, "expected one path and target per agent");
    return verdict;
  }

  std::map<int, int> owner;
  for (int i = 0; i < n; ++i) {
    const Path& path = paths[i];
    if (path.empty()) {
      report(ViolationKind::kEmptyPath, i, -1, -1, "empty path");
      continue;
    }
    if (path.front() != instance.starts[i]) report(ViolationKind::kWrongStart, i, -1, 0, "path does not begin at the start");
    const int j = claimed_targets[i];
    if (j < 0 || j >= instance.target_count()) {
      report(ViolationKind::kIneligibleTarget, i, -1, -1, "target index out of range");
    } else {
      if (!instance.eligible(i, j)) report(ViolationKind::kIneligibleTarget, i, -1, -1, "target not in the agent's target set");
      if (path.back() != instance.targets[j]) report(ViolationKind::kWrongTarget, i, -1, -1, "path does not end at the claimed target");
      auto [it, inserted] = owner.emplace(j, i);
      if (!inserted) report(ViolationKind::kDuplicateTarget, it->second, i, -1, "duplicate target");
    }
    for (size_t t = 1; t < path.size(); ++t) {
      if (!graph.is_vertex(path[t]) ||
          (path[t] != path[t - 1] && !graph.adjacent(path[t - 1], path[t]))) {
        report(ViolationKind::kDiscontinuous, i, -1, static_cast<int>(t), "illegal move");
      }
    }
  }
  if (!verdict.ok()) return verdict;

  int horizon = 0;
  for (const auto& p : paths) horizon = std::max(horizon, static_cast<int>(p.size()) - 1);
  for (int t = 0; t <= horizon; ++t) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (position_at(paths[a], t) == position_at(paths[b], t)) {
          report(ViolationKind::kVertexCollision, a, b, t, "vertex collision");
        }
        if (t < horizon && position_at(paths[a], t) == position_at(paths[b], t + 1) &&
            position_at(paths[a], t + 1) == position_at(paths[b], t) &&
            position_at(paths[a], t) != position_at(paths[a], t + 1)) {
          report(ViolationKind::kEdgeCollision, a, b, t, "edge collision");
        }
      }
    }
  }

  if (constraints != nullptr) {
    for (int i = 0; i < n; ++i) {
      const Path& path = paths[i];
      const int last = static_cast<int>(path.size()) - 1;
      for (const auto& c : constraints->for_agent(i)) {
        const bool breached =
            c.kind == ConstraintKind::kVertex
                ? position_at(path, c.time) == c.to
                : (c.time >= 1 && c.time <= last && path[c.time - 1] == c.from && path[c.time] == c.to);
        if (breached) report(ViolationKind::kConstraintBreach, i, -1, c.time, "constraint violated");
      }
    }
  }
  return verdict;
}

}  // namespace tapf
