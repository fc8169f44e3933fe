#include "tapf/solver.hpp"

namespace tapf {

std::string_view solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::kItaEcbs: return "ita-ecbs";
    case SolverKind::kItaEcbsV0: return "ita-ecbs-v0";
    case SolverKind::kItaCbs: return "ita-cbs";
    case SolverKind::kEcbsTa: return "ecbs-ta";
  }
  return "unknown";
}

std::optional<SolverKind> parse_solver_name(std::string_view name) {
  for (SolverKind kind : {SolverKind::kItaEcbs, SolverKind::kItaEcbsV0, SolverKind::kItaCbs,
                          SolverKind::kEcbsTa}) {
    if (solver_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kSolved: return "solved";
    case SolveStatus::kNoSolution: return "no-solution";
    case SolveStatus::kTimeout: return "timeout";
  }
  return "unknown";
}

SolverOutcome solve(SolverKind kind, const TapfInstance& instance, const SolverOptions& options) {
  switch (kind) {
    case SolverKind::kItaEcbs: return solve_ita_ecbs(instance, options);
    case SolverKind::kItaEcbsV0: return solve_ita_ecbs_v0(instance, options);
    case SolverKind::kItaCbs: return solve_ita_cbs(instance, options);
    case SolverKind::kEcbsTa: return solve_ecbs_ta(instance, options);
  }
  return {};
}

}  // namespace tapf
