// Command-line front end: solve, generate, benchmark.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tapf/bench.hpp"
#include "tapf/instance.hpp"
#include "tapf/solution_io.hpp"
#include "tapf/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoSolution = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

tapf::SolverKind solver_or_throw(const std::string& name) {
  auto kind = tapf::parse_solver_name(name);
  if (!kind) throw UsageError("unknown solver '" + name + "'");
  return *kind;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << contents;
}

struct SolveFlags {
  std::string map;
  std::string instance;
  std::string solver = "ita-ecbs";
  double w = 1.0;
  double timeout = 30.0;
  std::string output;
  int64_t seed = 0;
};

int run_solve(const SolveFlags& flags) {
  const tapf::SolverKind kind = solver_or_throw(flags.solver);
  if (flags.w < 1.0) throw UsageError("--w must be >= 1");
  tapf::TapfInstance instance;
  try {
    instance = tapf::load_instance_file(flags.instance, flags.map);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const std::string name = std::filesystem::path(flags.instance).filename().string();
  tapf::InstanceMeta meta = tapf::parse_batch_file_name(name);
  meta.seed = flags.seed;
  const auto result = tapf::run_solver(instance, meta, name, kind, flags.w, flags.timeout);

  if (result.outcome.solved() && !flags.output.empty()) {
    tapf::SolutionFile solution{result.outcome.flowtime, result.outcome.lower_bound,
                                result.outcome.targets, result.outcome.paths};
    write_file(flags.output, tapf::format_solution(instance, solution));
  }
  std::cout << tapf::run_csv_header() << '\n' << tapf::run_csv_row(result.record) << '\n';
  switch (result.outcome.status) {
    case tapf::SolveStatus::kSolved: return kExitOk;
    case tapf::SolveStatus::kNoSolution: return kExitNoSolution;
    case tapf::SolveStatus::kTimeout: return kExitTimeout;
  }
  return kExitNoSolution;
}

struct GenerateFlags {
  std::string map;
  int agents = 0;
  int k = 0;
  int shared_pct = 0;
  std::string seeds = "0..19";
  std::string outdir;
};

int run_generate(const GenerateFlags& flags) {
  const auto dots = flags.seeds.find("..");
  uint64_t first = 0;
  uint64_t last = 0;
  try {
    if (dots == std::string::npos) {
      first = last = std::stoull(flags.seeds);
    } else {
      first = std::stoull(flags.seeds.substr(0, dots));
      last = std::stoull(flags.seeds.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw UsageError("--seeds must look like A..B");
  }
  if (last < first) throw UsageError("--seeds range is empty");
  try {
    const auto files = tapf::generate_batch(flags.map, flags.agents, flags.k, flags.shared_pct, first,
                                            last, flags.outdir);
    std::cout << "wrote " << files.size() << " instances to " << flags.outdir << '\n';
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return kExitOk;
}

struct BenchmarkFlags {
  std::string batch;
  std::string solvers = "ita-ecbs,ecbs-ta";
  std::string ws = "1.00,1.01,1.02,1.03,1.04,1.05,1.10,1.20";
  double timeout = 30.0;
  int workers = 1;
  std::string csv;
};

int run_benchmark(const BenchmarkFlags& flags) {
  tapf::BenchmarkConfig config;
  config.batch_dir = flags.batch;
  for (const auto& s : split(flags.solvers, ',')) config.solvers.push_back(solver_or_throw(s));
  for (const auto& w : split(flags.ws, ',')) {
    try {
      config.ws.push_back(std::stod(w));
    } catch (const std::exception&) {
      throw UsageError("bad w value '" + w + "'");
    }
    if (config.ws.back() < 1.0) throw UsageError("w values must be >= 1");
  }
  if (config.solvers.empty() || config.ws.empty()) throw UsageError("need at least one solver and one w");
  if (!std::filesystem::is_directory(flags.batch)) throw UsageError("no batch directory " + flags.batch);
  config.timeout = flags.timeout;
  config.workers = flags.workers;

  const auto records = tapf::run_benchmark(config);
  std::ostringstream runs;
  runs << tapf::run_csv_header() << '\n';
  for (const auto& r : records) runs << tapf::run_csv_row(r) << '\n';
  write_file(flags.csv, runs.str());

  std::filesystem::path summary(flags.csv);
  summary.replace_filename(summary.stem().string() + "_summary.csv");
  write_file(summary.string(), tapf::summary_csv(tapf::aggregate_success(records)));
  std::cout << "wrote " << records.size() << " runs to " << flags.csv << " and " << summary.string()
            << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Target assignment and path finding solvers"};
  app.require_subcommand(1);

  SolveFlags solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  solve_cmd->add_option("--map", solve.map, "Map file (default: the instance's map line)");
  solve_cmd->add_option("--instance", solve.instance, "Instance file")->required();
  solve_cmd->add_option("--solver", solve.solver, "ita-ecbs | ita-ecbs-v0 | ita-cbs | ecbs-ta");
  solve_cmd->add_option("--w", solve.w, "Suboptimality factor");
  solve_cmd->add_option("--timeout", solve.timeout, "Wall-clock limit in seconds");
  solve_cmd->add_option("--output", solve.output, "Solution file to write on success");
  solve_cmd->add_option("--seed", solve.seed, "Recorded in the run record");

  GenerateFlags generate;
  auto* gen_cmd = app.add_subcommand("generate", "Generate a batch of random instances");
  gen_cmd->add_option("--map", generate.map, "Map file")->required();
  gen_cmd->add_option("--agents", generate.agents, "Number of agents")->required();
  gen_cmd->add_option("--targets-per-agent", generate.k, "Target set size")->required();
  gen_cmd->add_option("--shared-pct", generate.shared_pct, "Percentage of shared targets")->required();
  gen_cmd->add_option("--seeds", generate.seeds, "Seed range A..B");
  gen_cmd->add_option("--outdir", generate.outdir, "Output directory")->required();

  BenchmarkFlags bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "Run solvers over a batch directory");
  bench_cmd->add_option("--batch", bench.batch, "Directory of .inst files")->required();
  bench_cmd->add_option("--solvers", bench.solvers, "Comma-separated solver names");
  bench_cmd->add_option("--w-list", bench.ws, "Comma-separated suboptimality factors");
  bench_cmd->add_option("--timeout", bench.timeout, "Per-run wall-clock limit in seconds");
  bench_cmd->add_option("--workers", bench.workers, "Concurrent runs");
  bench_cmd->add_option("--csv", bench.csv, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return run_solve(solve);
    if (*gen_cmd) return run_generate(generate);
    if (*bench_cmd) return run_benchmark(bench);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
