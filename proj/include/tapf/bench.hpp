#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tapf/instance.hpp"
#include "tapf/solver.hpp"

namespace tapf {

// Generator parameters recovered from a batch file name.
struct InstanceMeta {
  std::string map_name;
  int agents = -1;
  int targets_per_agent = -1;
  int shared_pct = -1;
  int64_t seed = -1;
};

struct RunRecord {
  std::string instance;  // file name
  InstanceMeta meta;
  std::string solver;
  double w = 1.0;
  SolveStatus status = SolveStatus::kNoSolution;
  double runtime = 0;
  std::optional<Cost> flowtime;
  std::optional<Cost> lower_bound;
  int64_t nodes_generated = 0;
  int64_t nodes_expanded = 0;
  int64_t low_level_calls = 0;
  double assignment_time = 0;
  double low_level_time = 0;
  double node_creation_time = 0;
  double heuristic_time = 0;
};

// Fixed column order; the first line of every run CSV.
std::string run_csv_header();
std::string run_csv_row(const RunRecord& record);
// Same row with every timing column blanked, for determinism checks.
std::string run_csv_row_without_timing(const RunRecord& record);

/// `<map>_n<N>_k<K>_p<P>_s<seed>.inst`
std::string batch_file_name(const std::string& map_name, const GeneratorConfig& config);
InstanceMeta parse_batch_file_name(const std::string& file_name);

struct RunResult {
  RunRecord record;
  SolverOutcome outcome;
};

/// Runs one solver under a wall-clock budget. A solution found after the
/// budget is reported as a timeout.
RunResult run_solver(const TapfInstance& instance, const InstanceMeta& meta,
                     const std::string& instance_name, SolverKind solver, double w,
                     double timeout_seconds);

struct BenchmarkConfig {
  std::string batch_dir;
  std::vector<SolverKind> solvers;
  std::vector<double> ws;
  double timeout = 30.0;
  int workers = 1;
};

/// One record per (instance, solver, w) in (instance name, solver, w) order,
/// independent of the worker count. Unreadable instances become failed rows.
std::vector<RunRecord> run_benchmark(const BenchmarkConfig& config);

struct SuccessRate {
  std::string map_name;
  int agents = -1;
  int shared_pct = -1;
  std::string solver;
  double w = 1.0;
  int total = 0;
  int solved = 0;

  double rate() const { return total == 0 ? 0.0 : static_cast<double>(solved) / total; }
};

std::vector<SuccessRate> aggregate_success(const std::vector<RunRecord>& records);
std::string summary_csv(const std::vector<SuccessRate>& rates);

/// Writes `<outdir>/<batch_file_name>` for every seed in [first, last].
std::vector<std::string> generate_batch(const std::string& map_path, int agents, int k,
                                        int shared_pct, uint64_t first_seed, uint64_t last_seed,
                                        const std::string& outdir);

}  // namespace tapf
