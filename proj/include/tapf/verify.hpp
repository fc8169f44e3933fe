#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tapf/constraints.hpp"
#include "tapf/instance.hpp"
#include "tapf/types.hpp"

namespace tapf {

enum class ViolationKind {
  kWrongAgentCount,
  kEmptyPath,
  kWrongStart,
  kWrongTarget,
  kIneligibleTarget,
  kDuplicateTarget,
  kDiscontinuous,
  kVertexCollision,
  kEdgeCollision,
  kConstraintBreach,
};

struct Violation {
  ViolationKind kind;
  int agent = -1;
  int other_agent = -1;
  int time = -1;
  std::string message;
};

struct Verdict {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

/// Independent check of a TAPF solution: starts, eligible distinct targets,
/// moves along edges or waits, and no vertex or swap collisions with agents
/// resting at their targets. `constraints`, when given, are checked too.
Verdict verify_solution(const TapfInstance& instance, const std::vector<Path>& paths,
                        const std::vector<int>& claimed_targets,
                        const ConstraintSet* constraints = nullptr);

enum class OracleStatus { kSolved, kUnsolvable, kCapped };

struct OracleResult {
  OracleStatus status = OracleStatus::kUnsolvable;
  Cost flowtime = kInfiniteCost;
  std::vector<int> targets;
  std::vector<Path> paths;
  int64_t states_expanded = 0;
};

// 4 * (N + graph diameter).
int default_oracle_horizon(const TapfInstance& instance);

/// Exact minimum flowtime for small instances: every eligible assignment
/// (cheapest distance bound first) is solved by A* over joint states
/// (positions + per-agent finished flags). Finished agents stop paying but
/// keep occupying their target.
OracleResult oracle_optimal_flowtime(const TapfInstance& instance,
                                     std::optional<int> horizon_cap = std::nullopt);

/// Same search restricted to one assignment.
OracleResult oracle_for_assignment(const TapfInstance& instance, const std::vector<int>& targets,
                                   std::optional<int> horizon_cap = std::nullopt);

}  // namespace tapf
