#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "tapf/verify.hpp"

namespace tapf {

int default_oracle_horizon(const TapfInstance& instance) {
  const auto& graph = *instance.graph;
  int diameter = 0;
  for (VertexId v : graph.vertices()) {
    for (int d : bfs_distances(graph, v)) diameter = std::max(diameter, d);
  }
  return 4 * (instance.agent_count() + diameter);
}

namespace {

// Joint state packed as (vertex, finished) per agent.
class JointCodec {
 public:
  JointCodec(int agents, int cells) : agents_(agents) {
    while ((1 << bits_) < cells) ++bits_;
    if (agents * (bits_ + 1) > 64) throw std::invalid_argument("instance too large for the oracle");
  }

  uint64_t encode(const std::vector<VertexId>& pos, const std::vector<char>& done) const {
    uint64_t key = 0;
    for (int i = agents_ - 1; i >= 0; --i) {
      key = (key << (bits_ + 1)) | (static_cast<uint64_t>(pos[i]) << 1) | (done[i] ? 1u : 0u);
    }
    return key;
  }
  void decode(uint64_t key, std::vector<VertexId>& pos, std::vector<char>& done) const {
    const uint64_t mask = (uint64_t{1} << bits_) - 1;
    for (int i = 0; i < agents_; ++i) {
      done[i] = static_cast<char>(key & 1u);
      pos[i] = static_cast<VertexId>((key >> 1) & mask);
      key >>= bits_ + 1;
    }
  }

 private:
  int agents_;
  int bits_ = 1;
};

struct JointNode {
  uint64_t key;
  Cost g;
  Cost f;
  int time;
  int parent;
};

class AssignmentSearch {
 public:
  AssignmentSearch(const TapfInstance& instance, const std::vector<int>& targets, int horizon)
      : instance_(instance),
        graph_(*instance.graph),
        n_(instance.agent_count()),
        codec_(n_, graph_.cell_count()),
        horizon_(horizon) {
    for (int i = 0; i < n_; ++i) {
      goal_.push_back(instance.targets[targets[i]]);
      dist_.push_back(bfs_distances(graph_, goal_.back()));
    }
  }

  // Best plan strictly cheaper than `incumbent`, if any.
  std::optional<std::vector<Path>> run(Cost incumbent) {
    std::vector<VertexId> pos(instance_.starts);
    std::vector<char> done(static_cast<size_t>(n_), 0);
    std::vector<int> at_goal;
    for (int i = 0; i < n_; ++i) {
      if (pos[i] == goal_[i]) at_goal.push_back(i);
    }
    for (uint32_t mask = 0; mask < (1u << at_goal.size()); ++mask) {
      for (size_t b = 0; b < at_goal.size(); ++b) done[at_goal[b]] = (mask >> b) & 1u;
      push(codec_.encode(pos, done), 0, 0, -1, pos, done, incumbent);
    }

    std::vector<VertexId> next_pos(static_cast<size_t>(n_));
    std::vector<char> next_done(static_cast<size_t>(n_));
    while (!open_.empty()) {
      const auto [f, neg_g, index] = open_.top();
      open_.pop();
      const JointNode node = nodes_[index];
      if (best_g_[node.key] < node.g) continue;
      if (node.f >= incumbent) break;
      ++expanded_;
      codec_.decode(node.key, pos, done);
      if (std::all_of(done.begin(), done.end(), [](char d) { return d != 0; })) {
        return reconstruct(index);
      }
      Cost step = 0;
      for (char d : done) step += d ? 0 : 1;
      expand(0, pos, done, next_pos, next_done, [&] {
        push(codec_.encode(next_pos, next_done), node.g + step, node.time + 1, index, next_pos,
             next_done, incumbent);
      });
    }
    return std::nullopt;
  }

  Cost min_pruned_g() const { return min_pruned_g_; }
  int64_t expanded() const { return expanded_; }

 private:
  using OpenEntry = std::tuple<Cost, Cost, int>;  // f, -g, index

  Cost heuristic(const std::vector<VertexId>& pos, const std::vector<char>& done) const {
    Cost h = 0;
    for (int i = 0; i < n_; ++i) {
      if (!done[i]) h += std::max(dist_[i][pos[i]], 1);
    }
    return h;
  }

  void push(uint64_t key, Cost g, int time, int parent, const std::vector<VertexId>& pos,
            const std::vector<char>& done, Cost incumbent) {
    for (int i = 0; i < n_; ++i) {
      if (!done[i] && dist_[i][pos[i]] < 0) return;
    }
    if (time > horizon_) {
      min_pruned_g_ = std::min(min_pruned_g_, g);
      return;
    }
    const Cost f = g + heuristic(pos, done);
    if (f >= incumbent) return;
    auto [it, inserted] = best_g_.emplace(key, g);
    if (!inserted) {
      if (it->second <= g) return;
      it->second = g;
    }
    nodes_.push_back({key, g, f, time, parent});
    open_.emplace(f, -g, static_cast<int>(nodes_.size()) - 1);
  }

  // Enumerates collision-free joint moves agent by agent; `emit` sees the
  // completed next_pos/next_done.
  template <typename Emit>
  void expand(int i, const std::vector<VertexId>& pos, const std::vector<char>& done,
              std::vector<VertexId>& next_pos, std::vector<char>& next_done, Emit&& emit) const {
    if (i == n_) {
      emit();
      return;
    }
    auto place = [&](VertexId to, bool finished) {
      for (int j = 0; j < i; ++j) {
        if (next_pos[j] == to) return;
        if (to != pos[i] && next_pos[j] == pos[i] && pos[j] == to) return;
      }
      next_pos[i] = to;
      next_done[i] = finished;
      expand(i + 1, pos, done, next_pos, next_done, emit);
    };
    if (done[i]) {
      place(pos[i], true);
      return;
    }
    auto consider = [&](VertexId to) {
      place(to, false);
      if (to == goal_[i]) place(to, true);
    };
    consider(pos[i]);
    for (VertexId u : graph_.neighbors(pos[i])) consider(u);
  }

  std::vector<Path> reconstruct(int index) const {
    std::vector<int> chain;
    for (int k = index; k >= 0; k = nodes_[k].parent) chain.push_back(k);
    std::reverse(chain.begin(), chain.end());
    std::vector<Path> paths(static_cast<size_t>(n_));
    std::vector<VertexId> pos(static_cast<size_t>(n_));
    std::vector<char> done(static_cast<size_t>(n_));
    std::vector<char> finished(static_cast<size_t>(n_), 0);
    for (int k : chain) {
      codec_.decode(nodes_[k].key, pos, done);
      for (int i = 0; i < n_; ++i) {
        if (finished[i]) continue;
        paths[i].push_back(pos[i]);
        if (done[i]) finished[i] = 1;
      }
    }
    return paths;
  }

  const TapfInstance& instance_;
  const GridGraph& graph_;
  int n_;
  JointCodec codec_;
  int horizon_;
  std::vector<VertexId> goal_;
  std::vector<std::vector<int>> dist_;
  std::vector<JointNode> nodes_;
  std::unordered_map<uint64_t, Cost> best_g_;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open_;
  Cost min_pruned_g_ = kInfiniteCost;
  int64_t expanded_ = 0;
};

struct Candidate {
  Cost bound;
  std::vector<int> targets;
};

std::vector<Candidate> enumerate_assignments(const TapfInstance& instance) {
  const int n = instance.agent_count();
  const int m = instance.target_count();
  std::vector<std::vector<int>> dist_to_target;
  for (int j = 0; j < m; ++j) dist_to_target.push_back(bfs_distances(*instance.graph, instance.targets[j]));

  std::vector<Candidate> out;
  std::vector<int> chosen(static_cast<size_t>(n), -1);
  std::vector<char> used(static_cast<size_t>(m), 0);
  auto recurse = [&](auto&& self, int i, Cost sum) -> void {
    if (i == n) {
      out.push_back({sum, chosen});
      return;
    }
    for (int j = 0; j < m; ++j) {
      const int d = dist_to_target[j][instance.starts[i]];
      if (used[j] || !instance.eligible(i, j) || d < 0) continue;
      used[j] = 1;
      chosen[i] = j;
      self(self, i + 1, sum + d);
      used[j] = 0;
    }
  };
  recurse(recurse, 0, 0);
  std::stable_sort(out.begin(), out.end(),
                   [](const Candidate& a, const Candidate& b) { return a.bound < b.bound; });
  return out;
}

OracleResult search_candidates(const TapfInstance& instance, const std::vector<Candidate>& candidates,
                               std::optional<int> horizon_cap) {
  const int horizon = horizon_cap.value_or(default_oracle_horizon(instance));
  OracleResult result;
  Cost pruned = kInfiniteCost;
  for (const auto& candidate : candidates) {
    if (candidate.bound >= result.flowtime) break;
    AssignmentSearch search(instance, candidate.targets, horizon);
    auto paths = search.run(result.flowtime);
    result.states_expanded += search.expanded();
    pruned = std::min(pruned, search.min_pruned_g());
    if (paths) {
      Cost total = 0;
      for (const auto& p : *paths) total += path_cost(p);
      result.flowtime = total;
      result.targets = candidate.targets;
      result.paths = std::move(*paths);
    }
  }
  if (is_finite(result.flowtime)) {
    result.status = result.flowtime <= pruned ? OracleStatus::kSolved : OracleStatus::kCapped;
  } else {
    result.status = is_finite(pruned) ? OracleStatus::kCapped : OracleStatus::kUnsolvable;
  }
  return result;
}

}  // namespace

OracleResult oracle_optimal_flowtime(const TapfInstance& instance, std::optional<int> horizon_cap) {
  return search_candidates(instance, enumerate_assignments(instance), horizon_cap);
}

OracleResult oracle_for_assignment(const TapfInstance& instance, const std::vector<int>& targets,
                                   std::optional<int> horizon_cap) {
  Cost bound = 0;
  for (int i = 0; i < instance.agent_count(); ++i) {
    const int d = bfs_distances(*instance.graph, instance.targets[targets[i]])[instance.starts[i]];
    if (d < 0 || !instance.eligible(i, targets[i])) return {};
    bound += d;
  }
  return search_candidates(instance, {{bound, targets}}, horizon_cap);
}

}  // namespace tapf
