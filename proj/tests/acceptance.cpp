// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance [criterion ...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "support.hpp"
#include "tapf/bench.hpp"
#include "tapf/low_level.hpp"
#include "tapf/solution_io.hpp"
#include "tapf/solver.hpp"
#include "tapf/verify.hpp"

using namespace tapf;
namespace fs = std::filesystem;

namespace {

struct Report {
  int failures = 0;

  void line(int id, bool ok, const std::string& detail) {
    std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << detail << std::endl;
    if (!ok) ++failures;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SolverOutcome run(SolverKind kind, const TapfInstance& inst, double w, double limit,
                  const SearchTrace* trace = nullptr) {
  SolverOptions options;
  options.w = SuboptimalityFactor(w);
  options.time_limit = limit;
  options.trace = trace;
  return solve(kind, inst, options);
}

// ---------------------------------------------------------------- suite 1, 2, 5

struct SuiteCase {
  std::string label;
  TapfInstance instance;
};

std::vector<SuiteCase> small_suite() {
  std::vector<SuiteCase> cases;
  for (int n : {2, 3, 4}) {
    for (int k : {2, 3}) {
      for (int p : {0, 50, 100}) {
        for (uint64_t seed = 0; seed < 12; ++seed) {
          const uint64_t map_seed = 1000 * n + 100 * k + p + seed * 7919;
          const GridMap map = tapf::testing::random_map(8, 8, 10, map_seed);
          std::ostringstream label;
          label << "n" << n << "_k" << k << "_p" << p << "_s" << seed;
          cases.push_back({label.str(), generate_instance(map, {n, k, p, seed}, "random-8-8.map")});
        }
      }
    }
  }
  return cases;
}

void suite_criteria(Report& report, const std::set<int>& wanted) {
  const auto start = std::chrono::steady_clock::now();
  const auto cases = small_suite();
  const std::vector<double> ws{1.0, 1.1, 1.5, 2.0};
  const SolverKind bounded[] = {SolverKind::kItaEcbs, SolverKind::kItaEcbsV0, SolverKind::kEcbsTa};

  int solved_cases = 0;
  int unsolvable_cases = 0;
  int bound_runs = 0;
  std::vector<std::string> bound_failures;
  int optimal_runs = 0;
  std::vector<std::string> optimal_failures;
  int64_t checked_entries = 0;
  int64_t checked_nodes = 0;
  std::vector<std::string> matrix_failures;

  auto note = [](std::vector<std::string>& list, const std::string& what) {
    if (list.size() < 5) list.push_back(what);
    else if (list.size() == 5) list.push_back("...");
  };

  for (const SuiteCase& c : cases) {
    const OracleResult oracle = oracle_optimal_flowtime(c.instance);
    if (oracle.status == OracleStatus::kCapped) {
      note(bound_failures, c.label + " oracle capped");
      continue;
    }
    const bool solvable = oracle.status == OracleStatus::kSolved;
    solvable ? ++solved_cases : ++unsolvable_cases;
    if (solvable && !verify_solution(c.instance, oracle.paths, oracle.targets).ok()) {
      note(bound_failures, c.label + " oracle plan invalid");
    }

    for (double w : ws) {
      const SuboptimalityFactor factor(w);
      for (SolverKind kind : bounded) {
        const std::string tag = c.label + " " + std::string(solver_name(kind)) + " w=" + std::to_string(w);
        // Per-node matrix bounds for the ITA variants.
        SearchTrace trace;
        const bool ita = kind != SolverKind::kEcbsTa;
        const bool cross_check = kind == SolverKind::kItaEcbs;
        DistanceCache distances(c.instance.graph);
        trace.on_node = [&](const CtNodeView& node) {
          ++checked_nodes;
          for (int i = 0; i < c.instance.agent_count(); ++i) {
            for (int j = 0; j < c.instance.target_count(); ++j) {
              const Cost lb = node.lb_matrix->at(i, j);
              const Cost cost = node.cost_matrix->at(i, j);
              if (is_finite(lb) != is_finite(cost)) {
                note(matrix_failures, tag + " finiteness mismatch");
                continue;
              }
              if (!is_finite(lb)) continue;
              ++checked_entries;
              if (!(lb <= cost && factor.admits(cost, lb))) note(matrix_failures, tag + " entry out of bounds");
              if (cross_check && c.instance.eligible(i, j)) {
                const LowLevelQuery q{*c.instance.graph, distances, c.instance.starts[i], c.instance.targets[j],
                                      node.constraints, i, nullptr};
                if (shortest_path_search(q).cost != lb) note(matrix_failures, tag + " M_L differs from shortest path");
              }
            }
          }
        };
        const bool trace_this = ita && wanted.count(5);
        const SolverOutcome out = run(kind, c.instance, w, 30, trace_this ? &trace : nullptr);

        ++bound_runs;
        if (!solvable) {
          if (out.status != SolveStatus::kNoSolution) note(bound_failures, tag + " should report no solution");
          continue;
        }
        if (!out.solved()) {
          note(bound_failures, tag + " status " + std::string(status_name(out.status)));
          continue;
        }
        if (!verify_solution(c.instance, out.paths, out.targets).ok()) note(bound_failures, tag + " invalid plan");
        Cost sum = 0;
        for (const auto& p : out.paths) sum += path_cost(p);
        if (sum != out.flowtime) note(bound_failures, tag + " flowtime mismatch");
        if (!factor.admits(out.flowtime, oracle.flowtime)) note(bound_failures, tag + " exceeds w * optimum");
        if (!factor.admits(out.flowtime, out.lower_bound) || out.lower_bound > oracle.flowtime) {
          note(bound_failures, tag + " lower bound inconsistent");
        }
        if (w == 1.0 && kind != SolverKind::kEcbsTa) {
          ++optimal_runs;
          if (out.flowtime != oracle.flowtime) note(optimal_failures, tag + " not optimal");
        }
      }
    }
    ++optimal_runs;
    const SolverOutcome cbs = run(SolverKind::kItaCbs, c.instance, 1.0, 30);
    if (solvable ? !(cbs.solved() && cbs.flowtime == oracle.flowtime) : cbs.status != SolveStatus::kNoSolution) {
      note(optimal_failures, c.label + " ita-cbs differs from oracle");
    }
  }
  const double elapsed = seconds_since(start);

  auto joined = [](const std::vector<std::string>& list) {
    std::string s;
    for (const auto& x : list) s += (s.empty() ? "" : "; ") + x;
    return s;
  };
  std::ostringstream d1;
  d1 << cases.size() << " instances (" << solved_cases << " solvable, " << unsolvable_cases << " unsolvable), "
     << bound_runs << " bounded runs, " << elapsed << " s";
  if (!bound_failures.empty()) d1 << " | " << joined(bound_failures);
  if (wanted.count(1)) report.line(1, bound_failures.empty() && cases.size() >= 200 && elapsed < 300, d1.str());

  std::ostringstream d2;
  d2 << optimal_runs << " optimal runs equal the oracle";
  if (!optimal_failures.empty()) d2 << " | " << joined(optimal_failures);
  if (wanted.count(2)) report.line(2, optimal_failures.empty(), d2.str());

  std::ostringstream d5;
  d5 << checked_nodes << " nodes, " << checked_entries << " finite entries";
  if (!matrix_failures.empty()) d5 << " | " << joined(matrix_failures);
  if (wanted.count(5)) report.line(5, matrix_failures.empty() && checked_entries > 0, d5.str());
}

// ---------------------------------------------------------------- 3

void assignment_criterion(Report& report) {
  std::mt19937_64 rng(20240601);
  int hungarian_bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(uniform_below(rng, 6));
    const int m = n + static_cast<int>(uniform_below(rng, 9 - n));
    const CostMatrix costs = tapf::testing::random_matrix(rng, n, m, 50, trial % 4 == 0 ? 25 : 0);
    const auto all = tapf::testing::brute_force_costs(costs);
    const Assignment a = hungarian_solve(costs).first;
    const bool ok = all.empty() ? !a.feasible() : a.total_cost == all.front();
    if (!ok) ++hungarian_bad;
  }

  int dynamic_bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(uniform_below(rng, 6));
    const int m = n + static_cast<int>(uniform_below(rng, 9 - n));
    CostMatrix costs = tapf::testing::random_matrix(rng, n, m, 50, 15);
    auto state = hungarian_solve(costs).second;
    const int row = static_cast<int>(uniform_below(rng, n));
    std::vector<Cost> values;
    for (int j = 0; j < m; ++j) values.push_back(uniform_below(rng, 100) < 15 ? kInfiniteCost : static_cast<Cost>(uniform_below(rng, 51)));
    costs.set_row(row, values);
    const Assignment updated = dynamic_hungarian_update(state, row, values);
    const Assignment fresh = hungarian_solve(costs).first;
    const bool ok = fresh.feasible() ? updated.total_cost == fresh.total_cost : !updated.feasible();
    if (!ok) ++dynamic_bad;
  }

  int kbest_bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(uniform_below(rng, 4));
    const int m = n + static_cast<int>(uniform_below(rng, 7 - n));
    const CostMatrix costs = tapf::testing::random_matrix(rng, n, m, 9, trial % 3 == 0 ? 20 : 0);
    KBestAssignments kbest(costs);
    std::vector<Cost> seen;
    std::set<std::vector<int>> distinct;
    bool dup = false;
    while (auto a = kbest.next()) {
      seen.push_back(a->total_cost);
      dup |= !distinct.insert(a->column_of_row).second;
    }
    if (dup || seen != tapf::testing::brute_force_costs(costs)) ++kbest_bad;
  }
  std::ostringstream d;
  d << "hungarian 1000 trials, " << hungarian_bad << " mismatches; dynamic update 1000 trials, " << dynamic_bad
    << " mismatches; k-best 200 trials, " << kbest_bad << " mismatches";
  report.line(3, hungarian_bad + dynamic_bad + kbest_bad == 0, d.str());
}

// ---------------------------------------------------------------- 4

void admission_criterion(Report& report) {
  const Cost inf = kInfiniteCost;
  const SuboptimalityFactor w(2.0);
  // Sibling node whose cost-optimal assignment selects lower bounds summing to 6
  // while its lower-bound matrix has an assignment of 4.
  const CostMatrix sibling_lb = CostMatrix::from_rows({{1, 3, inf}, {3, 3, 3}});
  const CostMatrix sibling_cost = CostMatrix::from_rows({{2, 3, inf}, {3, 6, 6}});
  // Node holding the collision-free candidate of flowtime 9.
  const CostMatrix cand_lb = CostMatrix::from_rows({{5, 3, inf}, {3, 5, 5}});
  const CostMatrix cand_cost = CostMatrix::from_rows({{9, 5, inf}, {4, 9, 9}});

  const auto naive = assign_targets(sibling_lb, sibling_cost, AssignmentSource::kCosts);
  const auto proper = assign_targets(sibling_lb, sibling_cost, AssignmentSource::kLowerBounds);
  const auto candidate = assign_targets(cand_lb, cand_cost, AssignmentSource::kLowerBounds);
  const Cost naive_front = std::min(naive.lb, candidate.lb);
  const Cost proper_front = std::min(proper.lb, candidate.lb);
  const bool rejected = !focal_admits(candidate.cost, proper_front, w);
  const bool naive_admits = focal_admits(candidate.cost, naive_front, w);
  const bool shape = naive.lb == 6 && proper.lb == 4 && candidate.cost == 9;
  std::ostringstream d;
  d << "w=2, selected-LB sum " << naive.lb << ", M_L-optimal " << proper.lb << ", candidate " << candidate.cost
    << ": lower-bound assignment " << (rejected ? "rejects" : "admits") << ", cost assignment "
    << (naive_admits ? "admits" : "rejects");
  report.line(4, shape && rejected && naive_admits, d.str());
}

// ---------------------------------------------------------------- 6

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void performance_criterion(Report& report, const fs::path& data) {
  const GridMap map = load_map_file((data / "maps" / "random-32-32-10.map").string());
  const double timeout = 30;
  const int pcts[] = {0, 30, 60, 100};
  std::map<SolverKind, std::vector<double>> runtimes;
  std::map<SolverKind, int> successes;
  int index = 0;
  for (int n : {10, 20}) {
    for (uint64_t seed = 0; seed < 50; ++seed, ++index) {
      const TapfInstance inst = generate_instance(map, {n, 5, pcts[index % 4], seed}, "random-32-32-10.map");
      for (SolverKind kind : {SolverKind::kItaEcbs, SolverKind::kEcbsTa}) {
        const auto out = run(kind, inst, 1.05, timeout);
        const bool ok = out.solved() && out.stats.runtime <= timeout;
        if (ok) ++successes[kind];
        runtimes[kind].push_back(ok ? out.stats.runtime : timeout);
      }
    }
  }
  const SolverKind ita = SolverKind::kItaEcbs;
  const SolverKind ta = SolverKind::kEcbsTa;
  std::ostringstream d;
  d << "100 instances, w=1.05: ita-ecbs " << successes[ita] << " solved, median " << median(runtimes[ita])
    << " s; ecbs-ta " << successes[ta] << " solved, median " << median(runtimes[ta]) << " s";
  report.line(6, successes[ita] >= successes[ta] && median(runtimes[ita]) <= median(runtimes[ta]), d.str());
}

// ---------------------------------------------------------------- 7

void parser_criterion(Report& report, const fs::path& data) {
  const std::string text = slurp(data / "maps" / "empty-32-32.map");
  std::string lf;
  for (char ch : text) {
    if (ch != '\r') lf += ch;
  }
  const GridMap map = parse_map(text);
  const std::string once = serialize_map(map);
  const std::string twice = serialize_map(parse_map(once));
  std::string crlf;
  for (char ch : lf) crlf += ch == '\n' ? std::string("\r\n") : std::string(1, ch);
  const bool crlf_same = parse_map(crlf) == map;
  std::ostringstream d;
  d << "empty-32-32.map: " << map.passable_count() << " passable cells, round trip "
    << (once == lf && once == twice ? "byte-stable" : "differs") << ", CRLF " << (crlf_same ? "equal" : "differs");
  report.line(7, map.passable_count() == 1024 && once == lf && once == twice && crlf_same, d.str());
}

// ---------------------------------------------------------------- 8

// RunRecord CSV row with the timing columns removed.
std::string untimed(const std::string& row) {
  static const std::set<size_t> timing{9, 15, 16, 17, 18};
  std::stringstream in(row);
  std::string cell, out;
  for (size_t col = 0; std::getline(in, cell, ','); ++col) {
    if (!timing.count(col)) out += cell + ',';
  }
  return out;
}

std::string run_cli(const std::string& cli, const std::string& args, int& status) {
  const std::string cmd = "\"" + cli + "\" " + args;
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    status = -1;
    return output;
  }
  char buf[4096];
  while (size_t got = fread(buf, 1, sizeof buf, pipe)) output.append(buf, got);
  status = pclose(pipe);
  return output;
}

void determinism_criterion(Report& report, const fs::path& data, const std::string& cli) {
  const fs::path dir = fs::temp_directory_path() / "tapf_acceptance_determinism";
  fs::remove_all(dir);
  const auto files = generate_batch((data / "maps" / "empty-8-8.map").string(), 4, 3, 50, 0, 2, (dir / "batch").string());
  int compared = 0;
  std::vector<std::string> diffs;
  for (const auto& file : files) {
    for (std::string solver : {"ita-ecbs", "ita-ecbs-v0", "ita-cbs", "ecbs-ta"}) {
      std::string outputs[2];
      std::string records[2];
      for (int r = 0; r < 2; ++r) {
        const fs::path sol = dir / ("run" + std::to_string(r) + ".sol");
        int status = 0;
        const std::string out = run_cli(cli, "solve --instance \"" + file + "\" --solver " + solver +
                                                 " --w 1.1 --timeout 30 --seed 7 --output \"" + sol.string() + "\"",
                                        status);
        outputs[r] = slurp(sol);
        records[r] = untimed(out.substr(out.find('\n') + 1));
        fs::remove(sol);
      }
      ++compared;
      if (outputs[0].empty() || outputs[0] != outputs[1] || records[0] != records[1]) {
        diffs.push_back(fs::path(file).filename().string() + " " + solver);
      }
    }
  }
  // Benchmark output is independent of the worker count.
  auto bench = [&](int workers) {
    const fs::path csv = dir / ("bench" + std::to_string(workers) + ".csv");
    int status = 0;
    run_cli(cli, "benchmark --batch \"" + (dir / "batch").string() + "\" --solvers ita-ecbs,ecbs-ta --w-list 1.0,1.2 --timeout 30 --workers " +
                     std::to_string(workers) + " --csv \"" + csv.string() + "\"",
            status);
    std::stringstream in(slurp(csv));
    std::string line, all;
    while (std::getline(in, line)) all += untimed(line) + '\n';
    return all + slurp(dir / ("bench" + std::to_string(workers) + "_summary.csv"));
  };
  const std::string bench_a = bench(1);
  const std::string bench_b = bench(2);
  const bool bench_same = !bench_a.empty() && bench_a == bench_b;
  fs::remove_all(dir);
  std::ostringstream d;
  d << compared << " solve pairs via the CLI, " << diffs.size() << " differing; benchmark CSV "
    << (bench_same ? "identical" : "differs") << " across worker counts";
  for (const auto& x : diffs) d << " | " << x;
  report.line(8, diffs.empty() && bench_same, d.str());
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8};
  const fs::path data = TAPF_DATA_DIR;
  const std::string cli = TAPF_CLI_PATH;

  Report report;
  if (wanted.count(1) || wanted.count(2) || wanted.count(5)) suite_criteria(report, wanted);
  if (wanted.count(3)) assignment_criterion(report);
  if (wanted.count(4)) admission_criterion(report);
  if (wanted.count(6)) performance_criterion(report, data);
  if (wanted.count(7)) parser_criterion(report, data);
  if (wanted.count(8)) determinism_criterion(report, data, cli);
  return report.failures == 0 ? 0 : 1;
}
