#include <cassert>
#include <chrono>
#include <memory>

#include "high_level_queue.hpp"
#include "solver_common.hpp"
#include "tapf/collision.hpp"
#include "tapf/low_level.hpp"
#include "tapf/solver.hpp"

namespace tapf {

namespace {

enum class ItaVariant { kEcbs, kEcbsV0, kCbs };

using PathRow = std::vector<std::shared_ptr<const Path>>;

// Single-CT node: constraints, the lower-bound and cost matrices with the
// path behind every cost entry, and the incremental assignment state.
struct ItaNode {
  ConstraintSet constraints;
  CostMatrix lb_matrix;
  CostMatrix cost_matrix;
  std::vector<std::shared_ptr<PathRow>> path_rows;
  HungarianState hungarian;
  std::vector<int> targets;
  std::vector<Path> paths;
  Cost cost = kInfiniteCost;
  Cost lb = kInfiniteCost;
  int conflicts = 0;
  uint64_t id = 0;
  bool in_focal = false;

  CtNodeView view() const {
    return {constraints, &lb_matrix, &cost_matrix, paths, targets, cost, lb, conflicts};
  }
};

struct RowEntry {
  Cost lb = kInfiniteCost;
  Cost cost = kInfiniteCost;
  std::shared_ptr<const Path> path;
};

class ItaSolver {
 public:
  ItaSolver(const TapfInstance& instance, const SolverOptions& options, ItaVariant variant)
      : instance_(instance),
        graph_(*instance.graph),
        distances_(instance.graph),
        options_(options),
        w_(variant == ItaVariant::kCbs ? SuboptimalityFactor(1.0) : options.w),
        variant_(variant),
        deadline_(options.time_limit) {}

  SolverOutcome run() {
    detail::Stopwatch total;
    SolverOutcome outcome;
    try {
      outcome = search();
    } catch (const SearchTimeout&) {
      outcome = SolverOutcome{};
      outcome.status = SolveStatus::kTimeout;
    }
    stats_.runtime = total.seconds();
    outcome.stats = stats_;
    return outcome;
  }

 private:
  SolverOutcome search() {
    const int n = instance_.agent_count();
    const int m = instance_.target_count();

    auto root = std::make_unique<ItaNode>();
    root->lb_matrix = CostMatrix(n, m);
    root->cost_matrix = CostMatrix(n, m);
    root->path_rows.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      deadline_.check();
      fill_root_row(*root, i);
    }
    {
      detail::ScopedTimer timer(stats_.assignment_time);
      auto [assignment, state] = hungarian_solve(root->lb_matrix);
      root->hungarian = std::move(state);
      if (!assignment.feasible()) return no_solution();
      root->targets = std::move(assignment.column_of_row);
    }
    if (variant_ != ItaVariant::kCbs) plan_root_paths(*root);
    finish_node(*root);
    if (!is_finite(root->cost)) return no_solution();

    detail::HighLevelQueue<ItaNode> queue(w_);
    detail::NodePool<ItaNode> pool;
    auto accept = [&](std::unique_ptr<ItaNode> node) {
      node->id = next_id_++;
      ++stats_.nodes_generated;
      if (options_.trace && options_.trace->on_node) options_.trace->on_node(node->view());
      queue.push(pool.adopt(std::move(node)));
    };
    accept(std::move(root));

    while (!queue.empty()) {
      deadline_.check();
      const Cost front = queue.front_lb();
      ItaNode* current = queue.pop();
      if (options_.trace && options_.trace->on_expand) options_.trace->on_expand(front, current->view());

      const auto collision = first_collision(current->paths);
      if (!collision) {
        SolverOutcome outcome;
        outcome.status = SolveStatus::kSolved;
        outcome.paths = current->paths;
        outcome.targets = current->targets;
        outcome.flowtime = current->cost;
        outcome.lower_bound = front;
        return outcome;
      }
      ++stats_.nodes_expanded;

      for (const Constraint& constraint : detail::split_collision(*collision, current->paths)) {
        auto child = make_child(*current, constraint);
        if (child) accept(std::move(child));
      }
      pool.release(current);
    }
    return no_solution();
  }

  std::unique_ptr<ItaNode> make_child(const ItaNode& parent, const Constraint& constraint) {
    const int agent = constraint.agent;
    assert(!parent.constraints.contains(constraint));
    std::unique_ptr<ItaNode> child;
    {
      detail::ScopedTimer timer(stats_.node_creation_time);
      child = std::make_unique<ItaNode>();
      child->constraints = parent.constraints;
      child->constraints.add(constraint);
      child->lb_matrix = parent.lb_matrix;
      child->cost_matrix = parent.cost_matrix;
      child->path_rows = parent.path_rows;
      child->hungarian = parent.hungarian;
    }

    // Conflicts are counted against the parent's paths of the other agents.
    std::vector<const Path*> others;
    for (int i = 0; i < instance_.agent_count(); ++i) {
      if (i != agent) others.push_back(&parent.paths[i]);
    }
    const ConflictCounter context = variant_ == ItaVariant::kCbs ? ConflictCounter()
                                                                : ConflictCounter(graph_, others);
    replan_row(*child, agent, context, &constraint);

    {
      detail::ScopedTimer timer(stats_.assignment_time);
      const std::span<const Cost> row = child->lb_matrix.row(agent);
      Assignment assignment =
          dynamic_hungarian_update(child->hungarian, agent, std::vector<Cost>(row.begin(), row.end()));
      if (!assignment.feasible()) return nullptr;
      child->targets = std::move(assignment.column_of_row);
    }
    finish_node(*child);
    if (!is_finite(child->cost)) return nullptr;
    return child;
  }

  // Unconstrained rows: both matrices hold the true distance; paths are
  // materialized when an assignment first selects the entry.
  void fill_root_row(ItaNode& node, int agent) {
    detail::ScopedTimer timer(stats_.heuristic_time);
    const int m = instance_.target_count();
    std::vector<Cost> lbs(static_cast<size_t>(m), kInfiniteCost);
    for (int x = 0; x < m; ++x) {
      if (!instance_.eligible(agent, x)) continue;
      const int d = distances_.to(instance_.targets[x])[instance_.starts[agent]];
      if (d >= 0) lbs[x] = d;
    }
    node.lb_matrix.set_row(agent, lbs);
    node.cost_matrix.set_row(agent, std::move(lbs));
    node.path_rows[agent] = std::make_shared<PathRow>(static_cast<size_t>(m));
  }

  // A shortest path of cost `bound` cannot occupy the constrained cell at
  // the constrained time.
  bool out_of_reach(const Constraint& c, int target, Cost bound) const {
    const VertexId goal = instance_.targets[target];
    if (c.to == goal) return false;
    const int h = distances_.to(goal)[c.to];
    return h < 0 || c.time + h > bound;
  }

  // Assigned root entries are planned in agent order, each avoiding the
  // paths chosen before it.
  void plan_root_paths(ItaNode& node) {
    detail::ScopedTimer timer(stats_.low_level_time);
    std::vector<const Path*> planned;
    for (int i = 0; i < instance_.agent_count(); ++i) {
      const int x = node.targets[i];
      const Cost lb = node.lb_matrix.at(i, x);
      RowEntry entry = plan_entry(node.constraints, i, x, ConflictCounter(graph_, planned), lb);
      if (!entry.path) continue;
      node.cost_matrix.set(i, x, entry.cost);
      auto& slot = (*node.path_rows[i])[x];
      slot = std::move(entry.path);
      planned.push_back(slot.get());
    }
  }

  // Recomputes agent's row of both matrices under node.constraints.
  void replan_row(ItaNode& node, int agent, const ConflictCounter& context, const Constraint* added) {
    detail::ScopedTimer timer(stats_.low_level_time);
    const int m = instance_.target_count();
    std::vector<Cost> lbs(static_cast<size_t>(m), kInfiniteCost);
    std::vector<Cost> costs(static_cast<size_t>(m), kInfiniteCost);
    auto row = std::make_shared<PathRow>(static_cast<size_t>(m));
    const PathRow& old_row = *node.path_rows[agent];
    for (int x = 0; x < m; ++x) {
      if (!instance_.eligible(agent, x)) continue;
      const Cost old_lb = node.lb_matrix.at(agent, x);
      if (!is_finite(old_lb)) continue;
      const bool kept = variant_ != ItaVariant::kEcbsV0 && out_of_reach(*added, x, old_lb);
      if (kept && variant_ == ItaVariant::kCbs) {
        lbs[x] = costs[x] = old_lb;
        (*row)[x] = old_row[x];
        continue;
      }
      RowEntry entry = plan_entry(node.constraints, agent, x, context, kept ? old_lb : kInfiniteCost);
      lbs[x] = entry.lb;
      costs[x] = entry.cost;
      (*row)[x] = std::move(entry.path);
    }
    node.lb_matrix.set_row(agent, std::move(lbs));
    node.cost_matrix.set_row(agent, std::move(costs));
    node.path_rows[agent] = std::move(row);
  }

  // `known_lb` is a shortest cost already established under `constraints`.
  RowEntry plan_entry(const ConstraintSet& constraints, int agent, int target,
                      const ConflictCounter& context, Cost known_lb = kInfiniteCost) {
    const LowLevelQuery query{graph_, distances_, instance_.starts[agent], instance_.targets[target],
                              constraints, agent, &deadline_};
    RowEntry entry;
    auto take = [&entry](Cost lb, SearchResult& found) {
      if (!found.found()) return;
      entry.lb = lb;
      entry.cost = found.cost;
      entry.path = std::make_shared<const Path>(std::move(*found.path));
    };
    switch (variant_) {
      case ItaVariant::kEcbs: {
        Cost optimal = known_lb;
        if (!is_finite(optimal)) {
          ++stats_.low_level_calls;
          optimal = shortest_path_search(query).cost;
          if (!is_finite(optimal)) break;
        }
        ++stats_.low_level_calls;
        SearchResult bounded = search_with_lb(query, w_, optimal, context);
        take(optimal, bounded);
        break;
      }
      case ItaVariant::kEcbsV0: {
        ++stats_.low_level_calls;
        SearchResult found = focal_search(query, w_, context);
        take(found.lb, found);
        break;
      }
      case ItaVariant::kCbs: {
        ++stats_.low_level_calls;
        SearchResult found = shortest_path_search(query);
        take(found.cost, found);
        break;
      }
    }
    return entry;
  }

  // Derives pi, c, c_L, and d from the node's assignment.
  void finish_node(ItaNode& node) {
    const int n = instance_.agent_count();
    node.paths.assign(static_cast<size_t>(n), Path{});
    node.cost = 0;
    node.lb = 0;
    for (int i = 0; i < n; ++i) {
      const int x = node.targets[i];
      auto& path = (*node.path_rows[i])[x];
      if (!path && is_finite(node.cost_matrix.at(i, x))) {
        detail::ScopedTimer timer(stats_.low_level_time);
        RowEntry entry = plan_entry(node.constraints, i, x, ConflictCounter());
        assert(entry.cost == node.cost_matrix.at(i, x));
        path = std::move(entry.path);
      }
      if (!path) {
        node.cost = kInfiniteCost;
        return;
      }
      node.paths[i] = *path;
      node.cost += node.cost_matrix.at(i, x);
      node.lb += node.lb_matrix.at(i, x);
    }
    detail::ScopedTimer timer(stats_.heuristic_time);
    node.conflicts = count_collisions(node.paths);
  }

  SolverOutcome no_solution() const {
    SolverOutcome outcome;
    outcome.status = SolveStatus::kNoSolution;
    return outcome;
  }

  const TapfInstance& instance_;
  const GridGraph& graph_;
  DistanceCache distances_;
  const SolverOptions& options_;
  SuboptimalityFactor w_;
  ItaVariant variant_;
  Deadline deadline_;
  SolverStats stats_;
  uint64_t next_id_ = 0;
};

}  // namespace

SolverOutcome solve_ita_ecbs(const TapfInstance& instance, const SolverOptions& options) {
  return ItaSolver(instance, options, ItaVariant::kEcbs).run();
}

SolverOutcome solve_ita_ecbs_v0(const TapfInstance& instance, const SolverOptions& options) {
  return ItaSolver(instance, options, ItaVariant::kEcbsV0).run();
}

SolverOutcome solve_ita_cbs(const TapfInstance& instance, const SolverOptions& options) {
  return ItaSolver(instance, options, ItaVariant::kCbs).run();
}

NodeAssignment assign_targets(const CostMatrix& lb_matrix, const CostMatrix& cost_matrix,
                              AssignmentSource source) {
  NodeAssignment result;
  result.assignment =
      hungarian_solve(source == AssignmentSource::kLowerBounds ? lb_matrix : cost_matrix).first;
  if (!result.assignment.feasible()) return result;
  result.cost = assignment_cost(cost_matrix, result.assignment.column_of_row);
  result.lb = assignment_cost(lb_matrix, result.assignment.column_of_row);
  return result;
}

}  // namespace tapf
