#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tapf/assignment.hpp"
#include "tapf/constraints.hpp"
#include "tapf/instance.hpp"
#include "tapf/types.hpp"

namespace tapf {

enum class SolverKind { kItaEcbs, kItaEcbsV0, kItaCbs, kEcbsTa };

std::string_view solver_name(SolverKind kind);
std::optional<SolverKind> parse_solver_name(std::string_view name);

enum class SolveStatus { kSolved, kNoSolution, kTimeout };

std::string_view status_name(SolveStatus status);

struct SolverStats {
  int64_t nodes_generated = 0;
  int64_t nodes_expanded = 0;
  int64_t low_level_calls = 0;
  int64_t roots_generated = 0;  // ECBS-TA only
  double runtime = 0;           // seconds, wall clock
  double assignment_time = 0;
  double low_level_time = 0;
  double node_creation_time = 0;
  double heuristic_time = 0;
};

struct SolverOutcome {
  SolveStatus status = SolveStatus::kNoSolution;
  std::vector<Path> paths;
  std::vector<int> targets;  // target index per agent
  Cost flowtime = kInfiniteCost;
  Cost lower_bound = kInfiniteCost;  // OPEN front c_L when the solution was taken
  SolverStats stats;

  bool solved() const { return status == SolveStatus::kSolved; }
};

// Read-only view of a constraint-tree node handed to trace callbacks.
struct CtNodeView {
  const ConstraintSet& constraints;
  const CostMatrix* lb_matrix;    // null for ECBS-TA
  const CostMatrix* cost_matrix;  // null for ECBS-TA
  const std::vector<Path>& paths;
  const std::vector<int>& targets;
  Cost cost;
  Cost lb;
  int conflicts;
};

// Optional instrumentation; callbacks run synchronously on the solver thread.
struct SearchTrace {
  // Every node accepted into OPEN.
  std::function<void(const CtNodeView&)> on_node;
  // Every node taken from FOCAL, with the OPEN front's c_L at that moment.
  std::function<void(Cost front_lb, const CtNodeView&)> on_expand;
};

struct SolverOptions {
  SuboptimalityFactor w;
  double time_limit = 30.0;  // seconds; <= 0 expires immediately
  const SearchTrace* trace = nullptr;
};

SolverOutcome solve_ita_ecbs(const TapfInstance& instance, const SolverOptions& options);
SolverOutcome solve_ita_ecbs_v0(const TapfInstance& instance, const SolverOptions& options);
// Optimal; options.w is ignored.
SolverOutcome solve_ita_cbs(const TapfInstance& instance, const SolverOptions& options);
SolverOutcome solve_ecbs_ta(const TapfInstance& instance, const SolverOptions& options);

SolverOutcome solve(SolverKind kind, const TapfInstance& instance, const SolverOptions& options);

enum class AssignmentSource { kLowerBounds, kCosts };

// Target assignment of one CT node plus the two sums it induces.
struct NodeAssignment {
  Assignment assignment;
  Cost cost = kInfiniteCost;  // sum of selected cost-matrix entries (c)
  Cost lb = kInfiniteCost;    // sum of selected lower-bound entries (c_L)
};

/// Optimal assignment of either matrix, then c and c_L read off both. The
/// bounded solvers use kLowerBounds; kCosts is the naive alternative that
/// loses the suboptimality guarantee.
NodeAssignment assign_targets(const CostMatrix& lb_matrix, const CostMatrix& cost_matrix,
                              AssignmentSource source);

/// High-level FOCAL admission: c <= w * front c_L.
inline bool focal_admits(Cost node_cost, Cost front_lb, SuboptimalityFactor w) {
  return w.admits(node_cost, front_lb);
}

}  // namespace tapf
