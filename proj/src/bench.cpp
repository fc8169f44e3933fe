#include "tapf/bench.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <regex>
#include <sstream>
#include <thread>

namespace tapf {

namespace fs = std::filesystem;

std::string run_csv_header() {
  return "instance,map,agents,targets_per_agent,shared_pct,seed,solver,w,status,runtime_s,"
         "flowtime,lower_bound,ct_generated,ct_expanded,low_level_calls,assignment_s,"
         "low_level_s,node_creation_s,heuristic_s";
}

namespace {

std::string fixed(double value, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << value;
  return out.str();
}

std::string optional_cost(const std::optional<Cost>& c) { return c ? std::to_string(*c) : ""; }

std::string row(const RunRecord& r, bool timing) {
  auto t = [&](double seconds) { return timing ? fixed(seconds, 6) : std::string(); };
  std::ostringstream out;
  out << r.instance << ',' << r.meta.map_name << ',' << r.meta.agents << ','
      << r.meta.targets_per_agent << ',' << r.meta.shared_pct << ',' << r.meta.seed << ','
      << r.solver << ',' << fixed(r.w, 2) << ',' << status_name(r.status) << ',' << t(r.runtime)
      << ',' << optional_cost(r.flowtime) << ',' << optional_cost(r.lower_bound) << ','
      << r.nodes_generated << ',' << r.nodes_expanded << ',' << r.low_level_calls << ','
      << t(r.assignment_time) << ',' << t(r.low_level_time) << ',' << t(r.node_creation_time)
      << ',' << t(r.heuristic_time);
  return out.str();
}

}  // namespace

std::string run_csv_row(const RunRecord& record) { return row(record, true); }
std::string run_csv_row_without_timing(const RunRecord& record) { return row(record, false); }

std::string batch_file_name(const std::string& map_name, const GeneratorConfig& config) {
  return map_name + "_n" + std::to_string(config.agent_count) + "_k" +
         std::to_string(config.target_set_size) + "_p" + std::to_string(config.shared_percentage) +
         "_s" + std::to_string(config.seed) + ".inst";
}

InstanceMeta parse_batch_file_name(const std::string& file_name) {
  static const std::regex pattern(R"(^(.*)_n(\d+)_k(\d+)_p(\d+)_s(\d+)\.inst$)");
  InstanceMeta meta;
  std::smatch m;
  if (!std::regex_match(file_name, m, pattern)) {
    meta.map_name = fs::path(file_name).stem().string();
    return meta;
  }
  meta.map_name = m[1];
  meta.agents = std::stoi(m[2]);
  meta.targets_per_agent = std::stoi(m[3]);
  meta.shared_pct = std::stoi(m[4]);
  meta.seed = std::stoll(m[5]);
  return meta;
}

RunResult run_solver(const TapfInstance& instance, const InstanceMeta& meta,
                     const std::string& instance_name, SolverKind solver, double w,
                     double timeout_seconds) {
  SolverOptions options;
  options.w = SuboptimalityFactor(w);
  options.time_limit = timeout_seconds;
  RunResult result;
  result.outcome = solve(solver, instance, options);
  if (result.outcome.solved() && result.outcome.stats.runtime > timeout_seconds) {
    result.outcome.status = SolveStatus::kTimeout;
  }

  RunRecord& r = result.record;
  const auto& o = result.outcome;
  r.instance = instance_name;
  r.meta = meta;
  r.solver = std::string(solver_name(solver));
  r.w = w;
  r.status = o.status;
  r.runtime = o.stats.runtime;
  if (o.solved()) {
    r.flowtime = o.flowtime;
    r.lower_bound = o.lower_bound;
  }
  r.nodes_generated = o.stats.nodes_generated;
  r.nodes_expanded = o.stats.nodes_expanded;
  r.low_level_calls = o.stats.low_level_calls;
  r.assignment_time = o.stats.assignment_time;
  r.low_level_time = o.stats.low_level_time;
  r.node_creation_time = o.stats.node_creation_time;
  r.heuristic_time = o.stats.heuristic_time;
  return result;
}

std::vector<RunRecord> run_benchmark(const BenchmarkConfig& config) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(config.batch_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".inst") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  struct Job {
    size_t file;
    SolverKind solver;
    double w;
  };
  std::vector<Job> jobs;
  for (size_t f = 0; f < files.size(); ++f) {
    for (SolverKind s : config.solvers) {
      for (double w : config.ws) jobs.push_back({f, s, w});
    }
  }

  std::vector<RunRecord> records(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < jobs.size(); k = next++) {
      const Job& job = jobs[k];
      const std::string name = files[job.file].filename().string();
      const InstanceMeta meta = parse_batch_file_name(name);
      try {
        const TapfInstance instance = load_instance_file(files[job.file].string());
        records[k] = run_solver(instance, meta, name, job.solver, job.w, config.timeout).record;
      } catch (const std::exception&) {
        RunRecord failed;
        failed.instance = name;
        failed.meta = meta;
        failed.solver = std::string(solver_name(job.solver));
        failed.w = job.w;
        failed.status = SolveStatus::kNoSolution;
        records[k] = failed;
      }
    }
  };
  const int workers = std::max(1, config.workers);
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return records;
}

std::vector<SuccessRate> aggregate_success(const std::vector<RunRecord>& records) {
  using Key = std::tuple<std::string, int, int, std::string, int64_t>;
  std::map<Key, SuccessRate> groups;
  for (const auto& r : records) {
    const Key key{r.meta.map_name, r.meta.agents, r.meta.shared_pct, r.solver, std::llround(r.w * 1e6)};
    auto& g = groups[key];
    g.map_name = r.meta.map_name;
    g.agents = r.meta.agents;
    g.shared_pct = r.meta.shared_pct;
    g.solver = r.solver;
    g.w = r.w;
    ++g.total;
    if (r.status == SolveStatus::kSolved) ++g.solved;
  }
  std::vector<SuccessRate> out;
  for (auto& [key, g] : groups) out.push_back(g);
  return out;
}

std::string summary_csv(const std::vector<SuccessRate>& rates) {
  std::ostringstream out;
  out << "map,agents,shared_pct,solver,w,total,solved,success_rate\n";
  for (const auto& g : rates) {
    out << g.map_name << ',' << g.agents << ',' << g.shared_pct << ',' << g.solver << ','
        << fixed(g.w, 2) << ',' << g.total << ',' << g.solved << ',' << fixed(g.rate(), 4) << '\n';
  }
  return out.str();
}

std::vector<std::string> generate_batch(const std::string& map_path, int agents, int k,
                                        int shared_pct, uint64_t first_seed, uint64_t last_seed,
                                        const std::string& outdir) {
  const GridMap map = load_map_file(map_path);
  fs::create_directories(outdir);
  const std::string relative_map = fs::relative(fs::absolute(map_path), fs::absolute(outdir)).generic_string();
  const std::string map_name = fs::path(map_path).stem().string();
  std::vector<std::string> written;
  for (uint64_t seed = first_seed; seed <= last_seed; ++seed) {
    const GeneratorConfig config{agents, k, shared_pct, seed};
    const TapfInstance instance = generate_instance(map, config, relative_map);
    const fs::path file = fs::path(outdir) / batch_file_name(map_name, config);
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << save_instance(instance);
    written.push_back(file.string());
  }
  return written;
}

}  // namespace tapf
