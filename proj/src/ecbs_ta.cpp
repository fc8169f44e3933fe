#include <cassert>
#include <memory>
#include <optional>

#include "high_level_queue.hpp"
#include "solver_common.hpp"
#include "tapf/collision.hpp"
#include "tapf/low_level.hpp"
#include "tapf/solver.hpp"

namespace tapf {

namespace {

// CT-forest node: one fixed target assignment per tree.
struct EcbsNode {
  ConstraintSet constraints;
  std::vector<int> targets;
  std::vector<Path> paths;
  std::vector<Cost> lbs;  // per-agent focal lower bounds (L)
  Cost cost = kInfiniteCost;
  Cost lb = kInfiniteCost;
  int conflicts = 0;
  uint64_t id = 0;
  bool in_focal = false;
  bool is_root = false;

  CtNodeView view() const {
    return {constraints, nullptr, nullptr, paths, targets, cost, lb, conflicts};
  }
};

class EcbsTaSolver {
 public:
  EcbsTaSolver(const TapfInstance& instance, const SolverOptions& options)
      : instance_(instance),
        graph_(*instance.graph),
        distances_(instance.graph),
        options_(options),
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
  // Unconstrained distances; the source of every root's assignment.
  CostMatrix distance_matrix() const {
    const int n = instance_.agent_count();
    const int m = instance_.target_count();
    CostMatrix costs(n, m);
    for (int i = 0; i < n; ++i) {
      std::vector<Cost> row(static_cast<size_t>(m), kInfiniteCost);
      for (int j = 0; j < m; ++j) {
        if (!instance_.eligible(i, j)) continue;
        const int d = distances_.to(instance_.targets[j])[instance_.starts[i]];
        if (d >= 0) row[j] = d;
      }
      costs.set_row(i, std::move(row));
    }
    return costs;
  }

  SolverOutcome search() {
    {
      detail::ScopedTimer timer(stats_.heuristic_time);
      assignments_.emplace(distance_matrix());
    }
    detail::HighLevelQueue<EcbsNode> queue(options_.w);
    detail::NodePool<EcbsNode> pool;
    auto accept = [&](std::unique_ptr<EcbsNode> node) {
      node->id = next_id_++;
      ++stats_.nodes_generated;
      if (options_.trace && options_.trace->on_node) options_.trace->on_node(node->view());
      queue.push(pool.adopt(std::move(node)));
    };
    // Generates the next root; false once every assignment has been used.
    auto add_root = [&]() {
      std::optional<Assignment> next;
      {
        detail::ScopedTimer timer(stats_.assignment_time);
        next = assignments_->next();
      }
      if (!next) return false;
      ++stats_.roots_generated;
      accept(make_root(next->column_of_row));
      return true;
    };

    if (!add_root()) return no_solution();
    while (true) {
      deadline_.check();
      if (queue.empty() && !add_root()) return no_solution();
      const Cost front = queue.front_lb();
      EcbsNode* current = queue.pop();
      if (options_.trace && options_.trace->on_expand) options_.trace->on_expand(front, current->view());
      // The newest root leaves OPEN: its successor tree's root takes over as
      // the bound for all not yet generated trees.
      if (current->is_root) add_root();

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
  }

  std::unique_ptr<EcbsNode> make_root(const std::vector<int>& targets) {
    const int n = instance_.agent_count();
    auto root = std::make_unique<EcbsNode>();
    root->is_root = true;
    root->targets = targets;
    root->paths.resize(static_cast<size_t>(n));
    root->lbs.assign(static_cast<size_t>(n), kInfiniteCost);
    std::vector<const Path*> planned;
    for (int i = 0; i < n; ++i) {
      const ConflictCounter context(graph_, planned);
      SearchResult found = plan(*root, i, context);
      // Targets were taken from finite distances, so an unconstrained path exists.
      assert(found.found());
      root->paths[i] = std::move(*found.path);
      root->lbs[i] = found.lb;
      planned.push_back(&root->paths[i]);
    }
    finish_node(*root);
    return root;
  }

  std::unique_ptr<EcbsNode> make_child(const EcbsNode& parent, const Constraint& constraint) {
    const int agent = constraint.agent;
    assert(!parent.constraints.contains(constraint));
    std::unique_ptr<EcbsNode> child;
    {
      detail::ScopedTimer timer(stats_.node_creation_time);
      child = std::make_unique<EcbsNode>(parent);
      child->constraints.add(constraint);
      child->is_root = false;
    }
    std::vector<const Path*> others;
    for (int i = 0; i < instance_.agent_count(); ++i) {
      if (i != agent) others.push_back(&parent.paths[i]);
    }
    SearchResult found = plan(*child, agent, ConflictCounter(graph_, others));
    if (!found.found()) return nullptr;
    child->paths[agent] = std::move(*found.path);
    child->lbs[agent] = found.lb;
    finish_node(*child);
    return child;
  }

  SearchResult plan(const EcbsNode& node, int agent, const ConflictCounter& context) {
    detail::ScopedTimer timer(stats_.low_level_time);
    ++stats_.low_level_calls;
    const LowLevelQuery query{graph_, distances_, instance_.starts[agent],
                              instance_.targets[node.targets[agent]], node.constraints, agent,
                              &deadline_};
    return focal_search(query, options_.w, context);
  }

  void finish_node(EcbsNode& node) {
    node.cost = 0;
    node.lb = 0;
    for (size_t i = 0; i < node.paths.size(); ++i) {
      node.cost += path_cost(node.paths[i]);
      node.lb += node.lbs[i];
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
  Deadline deadline_;
  SolverStats stats_;
  std::optional<KBestAssignments> assignments_;
  uint64_t next_id_ = 0;
};

}  // namespace

SolverOutcome solve_ecbs_ta(const TapfInstance& instance, const SolverOptions& options) {
  return EcbsTaSolver(instance, options).run();
}

}  // namespace tapf
