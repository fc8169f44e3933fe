#include "tapf/low_level.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <unordered_set>

namespace tapf {

const std::vector<int>& DistanceCache::to(VertexId goal) const {
  std::lock_guard lock(mutex_);
  auto& slot = tables_[goal];
  if (!slot) slot = std::make_unique<const std::vector<int>>(bfs_distances(*graph_, goal));
  return *slot;
}

ConflictCounter::ConflictCounter(const GridGraph& graph, const std::vector<const Path*>& others)
    : cells_(static_cast<uint64_t>(graph.cell_count())) {
  for (const Path* path : others) {
    if (path == nullptr || path->empty()) continue;
    const int last = static_cast<int>(path->size()) - 1;
    for (int t = 0; t < last; ++t) ++timed_[key((*path)[t], t)];
    parked_[path->back()].push_back(last);
    for (int t = 1; t <= last; ++t) {
      if ((*path)[t - 1] != (*path)[t]) ++moves_[key((*path)[t - 1], t) * cells_ + (*path)[t]];
    }
  }
}

int ConflictCounter::count(VertexId prev, VertexId v, int t) const {
  int n = 0;
  if (auto it = timed_.find(key(v, t)); it != timed_.end()) n += it->second;
  if (auto it = parked_.find(v); it != parked_.end()) {
    for (int arrival : it->second) n += arrival <= t ? 1 : 0;
  }
  if (prev >= 0 && prev != v && t >= 1) {
    if (auto it = moves_.find(key(v, t) * cells_ + prev); it != moves_.end()) n += it->second;
  }
  return n;
}

int search_horizon(const GridGraph& graph, const ConstraintSet& constraints, int agent) {
  return constraints.latest_time(agent) + graph.vertex_count();
}

bool path_satisfies(const GridGraph& graph, const Path& path, VertexId start, VertexId goal,
                    const ConstraintSet& constraints, int agent) {
  if (path.empty() || path.front() != start || path.back() != goal) return false;
  const int last = static_cast<int>(path.size()) - 1;
  for (int t = 0; t <= last; ++t) {
    if (!graph.is_vertex(path[t])) return false;
    if (t > 0 && path[t] != path[t - 1] && !graph.adjacent(path[t - 1], path[t])) return false;
  }
  for (const auto& c : constraints.for_agent(agent)) {
    if (c.kind == ConstraintKind::kVertex) {
      const VertexId at = c.time <= last ? path[c.time] : path.back();
      if (at == c.to) return false;
    } else if (c.time >= 1 && c.time <= last) {
      if (path[c.time - 1] == c.from && path[c.time] == c.to) return false;
    }
  }
  return true;
}

namespace {

constexpr int kDeadlineStride = 256;

struct Node {
  VertexId v;
  int t;
  int parent;
  int conflicts;
  Cost f;
  bool closed = false;
  bool in_focal = false;
};

// State shared by the three searches.
class SpaceTimeSearch {
 public:
  explicit SpaceTimeSearch(const LowLevelQuery& q)
      : query_(q),
        table_(q.constraints, q.agent, q.graph.cell_count()),
        dist_(q.distances.to(q.goal)),
        horizon_(table_.latest_time() + q.graph.vertex_count()),
        rest_(table_.earliest_rest_time(q.goal)),
        cells_(static_cast<uint64_t>(q.graph.cell_count())) {}

  // False when the goal cannot be reached at all.
  bool feasible() const {
    return query_.graph.is_vertex(query_.start) && query_.graph.is_vertex(query_.goal) &&
           dist_[query_.start] >= 0 && !table_.blocks_vertex(query_.start, 0) && rest_ <= horizon_;
  }

  Cost f_value(VertexId v, int t) const {
    return std::max<Cost>(t + dist_[v], rest_);
  }
  bool is_goal(const Node& n) const { return n.v == query_.goal && n.t >= rest_; }

  uint64_t key(VertexId v, int t) const { return static_cast<uint64_t>(t) * cells_ + v; }

  void tick() {
    if (query_.deadline != nullptr && ++ticks_ % kDeadlineStride == 0) query_.deadline->check();
  }

  // Calls fn(next_vertex) for each action allowed at (v, t).
  template <typename Fn>
  void for_each_successor(VertexId v, int t, Fn&& fn) const {
    const int nt = t + 1;
    if (nt > horizon_) return;
    auto consider = [&](VertexId u) {
      if (dist_[u] < 0) return;
      if (table_.blocks_vertex(u, nt) || table_.blocks_edge(v, u, nt)) return;
      fn(u);
    };
    consider(v);
    for (VertexId u : query_.graph.neighbors(v)) consider(u);
  }

  Path reconstruct(const std::vector<Node>& nodes, int index) const {
    Path path(static_cast<size_t>(nodes[index].t) + 1);
    for (int i = index; i >= 0; i = nodes[i].parent) path[nodes[i].t] = nodes[i].v;
    return path;
  }

  const LowLevelQuery& query_;
  AgentConstraintTable table_;
  const std::vector<int>& dist_;
  int horizon_;
  int rest_;
  uint64_t cells_;
  int ticks_ = 0;
};

// OPEN: f, larger g, vertex id, insertion order (index).
struct OpenOrder {
  const std::vector<Node>* nodes;
  bool operator()(int a, int b) const {
    const Node& x = (*nodes)[a];
    const Node& y = (*nodes)[b];
    if (x.f != y.f) return x.f < y.f;
    if (x.t != y.t) return x.t > y.t;
    if (x.v != y.v) return x.v < y.v;
    return a < b;
  }
};

// FOCAL: conflicts, f, larger g, insertion order.
struct FocalOrder {
  const std::vector<Node>* nodes;
  bool operator()(int a, int b) const {
    const Node& x = (*nodes)[a];
    const Node& y = (*nodes)[b];
    if (x.conflicts != y.conflicts) return x.conflicts < y.conflicts;
    if (x.f != y.f) return x.f < y.f;
    if (x.t != y.t) return x.t > y.t;
    return a < b;
  }
};

// Shared body of focal_search (with OPEN, moving bound) and search_with_lb
// (fixed bound, no OPEN).
SearchResult run_focal(const LowLevelQuery& query, SuboptimalityFactor w,
                       const ConflictCounter& conflicts, std::optional<Cost> fixed_lb) {
  SpaceTimeSearch search(query);
  if (!search.feasible()) return {};
  if (fixed_lb && !is_finite(*fixed_lb)) return {};

  std::vector<Node> nodes;
  std::unordered_map<uint64_t, int> index;
  std::set<int, OpenOrder> open(OpenOrder{&nodes});
  std::set<int, FocalOrder> focal(FocalOrder{&nodes});
  const bool use_open = !fixed_lb.has_value();
  Cost bound = use_open ? kInfiniteCost : w.bound(*fixed_lb);

  auto push = [&](VertexId v, int t, int parent, int conflict_count) {
    const Cost f = search.f_value(v, t);
    if (!use_open && f > bound) return;
    const uint64_t k = search.key(v, t);
    if (auto it = index.find(k); it != index.end()) {
      Node& existing = nodes[it->second];
      if (existing.closed || existing.conflicts <= conflict_count) return;
      // Same (v, t) means same g and f; keep the less conflicting parent.
      if (existing.in_focal) focal.erase(it->second);
      existing.conflicts = conflict_count;
      existing.parent = parent;
      if (existing.in_focal) focal.insert(it->second);
      return;
    }
    const int id = static_cast<int>(nodes.size());
    nodes.push_back({v, t, parent, conflict_count, f});
    index.emplace(k, id);
    if (use_open) open.insert(id);
    if (f <= bound) {
      nodes[id].in_focal = true;
      focal.insert(id);
    }
  };

  push(query.start, 0, -1, conflicts.count(-1, query.start, 0));
  Cost f_min = kInfiniteCost;
  if (use_open) {
    f_min = nodes[*open.begin()].f;
    bound = w.bound(f_min);
    // The start node was inserted before the bound was known.
    if (!nodes[0].in_focal && nodes[0].f <= bound) {
      nodes[0].in_focal = true;
      focal.insert(0);
    }
  }

  while (!focal.empty()) {
    search.tick();
    const int current = *focal.begin();
    focal.erase(focal.begin());
    Node& node = nodes[current];
    node.in_focal = false;
    node.closed = true;
    if (use_open) open.erase(current);

    if (search.is_goal(node)) {
      SearchResult result;
      result.cost = node.t;
      result.lb = use_open ? f_min : *fixed_lb;
      result.path = search.reconstruct(nodes, current);
      return result;
    }

    const VertexId v = node.v;
    const int t = node.t;
    const int base = node.conflicts;
    search.for_each_successor(v, t, [&](VertexId u) {
      push(u, t + 1, current, base + conflicts.count(v, u, t + 1));
    });

    if (use_open) {
      if (open.empty()) break;
      const Cost new_f_min = nodes[*open.begin()].f;
      if (new_f_min > f_min) {
        const Cost new_bound = w.bound(new_f_min);
        for (auto it = open.begin(); it != open.end(); ++it) {
          Node& n = nodes[*it];
          if (n.f > new_bound) break;
          if (n.f > bound && !n.in_focal) {
            n.in_focal = true;
            focal.insert(*it);
          }
        }
        f_min = new_f_min;
        bound = new_bound;
      }
    }
  }
  return {};
}

}  // namespace

SearchResult shortest_path_search(const LowLevelQuery& query) {
  SpaceTimeSearch search(query);
  if (!search.feasible()) return {};

  std::vector<Node> nodes;
  std::unordered_set<uint64_t> seen;
  auto worse = [&nodes](int a, int b) {
    const Node& x = nodes[a];
    const Node& y = nodes[b];
    if (x.f != y.f) return x.f > y.f;
    if (x.t != y.t) return x.t < y.t;
    if (x.v != y.v) return x.v > y.v;
    return a > b;
  };
  std::priority_queue<int, std::vector<int>, decltype(worse)> open(worse);

  auto push = [&](VertexId v, int t, int parent) {
    if (!seen.insert(search.key(v, t)).second) return;
    nodes.push_back({v, t, parent, 0, search.f_value(v, t)});
    open.push(static_cast<int>(nodes.size()) - 1);
  };
  push(query.start, 0, -1);

  while (!open.empty()) {
    search.tick();
    const int current = open.top();
    open.pop();
    if (search.is_goal(nodes[current])) {
      SearchResult result;
      result.lb = result.cost = nodes[current].t;
      result.path = search.reconstruct(nodes, current);
      return result;
    }
    const VertexId v = nodes[current].v;
    const int t = nodes[current].t;
    search.for_each_successor(v, t, [&](VertexId u) { push(u, t + 1, current); });
  }
  return {};
}

SearchResult focal_search(const LowLevelQuery& query, SuboptimalityFactor w,
                          const ConflictCounter& conflicts) {
  return run_focal(query, w, conflicts, std::nullopt);
}

SearchResult search_with_lb(const LowLevelQuery& query, SuboptimalityFactor w, Cost known_lb,
                            const ConflictCounter& conflicts) {
  return run_focal(query, w, conflicts, known_lb);
}

}  // namespace tapf
