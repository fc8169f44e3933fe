#include "doctest.h"
#include "support.hpp"
#include "tapf/low_level.hpp"

using namespace tapf;
using tapf::testing::graph_from_rows;

namespace {

struct Fixture {
  std::shared_ptr<const GridGraph> graph;
  DistanceCache distances;
  ConstraintSet constraints;

  explicit Fixture(const std::vector<std::string>& rows)
      : graph(graph_from_rows(rows)), distances(graph) {}

  VertexId at(int r, int c) const { return graph->vertex_at(r, c); }
  LowLevelQuery query(VertexId s, VertexId g, int agent = 0) const {
    return {*graph, distances, s, g, constraints, agent, nullptr};
  }
};

int path_conflicts(const Path& path, const ConflictCounter& counter) {
  int n = counter.count(-1, path[0], 0);
  for (size_t t = 1; t < path.size(); ++t) n += counter.count(path[t - 1], path[t], static_cast<int>(t));
  return n;
}

// Fewest conflicts over every constraint-respecting path of cost <= bound.
int min_conflicts_within(const Fixture& f, VertexId s, VertexId g, Cost bound,
                         const ConflictCounter& counter) {
  int best = std::numeric_limits<int>::max();
  Path path{s};
  auto dfs = [&](auto&& self) -> void {
    if (path.back() == g && path_satisfies(*f.graph, path, s, g, f.constraints, 0)) {
      best = std::min(best, path_conflicts(path, counter));
    }
    if (static_cast<Cost>(path.size()) - 1 >= bound) return;
    std::vector<VertexId> moves(f.graph->neighbors(path.back()));
    moves.push_back(path.back());
    for (VertexId u : moves) {
      path.push_back(u);
      self(self);
      path.pop_back();
    }
  };
  dfs(dfs);
  return best;
}

}  // namespace

TEST_CASE("start equal to goal costs nothing") {
  Fixture f({"...", "..."});
  const auto r = shortest_path_search(f.query(f.at(1, 1), f.at(1, 1)));
  CHECK(r.cost == 0);
  CHECK(r.lb == 0);
  CHECK(*r.path == Path{f.at(1, 1)});
}

TEST_CASE("four-cell corridor") {
  Fixture f({"...."});
  SUBCASE("unconstrained") {
    const auto r = shortest_path_search(f.query(f.at(0, 0), f.at(0, 3)));
    CHECK(r.cost == 3);
  }
  SUBCASE("second cell blocked at t=1 forces one wait") {
    f.constraints.add(Constraint::vertex(0, f.at(0, 1), 1));
    const auto r = shortest_path_search(f.query(f.at(0, 0), f.at(0, 3)));
    CHECK(r.cost == 4);
    CHECK(r.cost == tapf::testing::time_expanded_bfs(*f.graph, f.at(0, 0), f.at(0, 3), f.constraints, 0, 20));
    CHECK(path_satisfies(*f.graph, *r.path, f.at(0, 0), f.at(0, 3), f.constraints, 0));
  }
  SUBCASE("constraints of other agents are ignored") {
    f.constraints.add(Constraint::vertex(1, f.at(0, 1), 1));
    CHECK(shortest_path_search(f.query(f.at(0, 0), f.at(0, 3))).cost == 3);
  }
}

TEST_CASE("edge constraint uses the arrival time") {
  Fixture f({"...."});
  f.constraints.add(Constraint::edge(0, f.at(0, 0), f.at(0, 1), 1));
  const auto r = shortest_path_search(f.query(f.at(0, 0), f.at(0, 3)));
  CHECK(r.cost == 4);
  CHECK((*r.path)[1] == f.at(0, 0));
}

TEST_CASE("goal blocked later forces a late arrival") {
  Fixture f({"...."});
  f.constraints.add(Constraint::vertex(0, f.at(0, 3), 6));
  const auto r = shortest_path_search(f.query(f.at(0, 0), f.at(0, 3)));
  CHECK(r.cost == 7);
  CHECK(path_satisfies(*f.graph, *r.path, f.at(0, 0), f.at(0, 3), f.constraints, 0));
}

TEST_CASE("unreachable goal yields infinity") {
  Fixture f({".@."});
  const auto r = shortest_path_search(f.query(f.at(0, 0), f.at(0, 2)));
  CHECK_FALSE(r.found());
  CHECK_FALSE(is_finite(r.cost));
  CHECK_FALSE(is_finite(r.lb));
  CHECK_FALSE(focal_search(f.query(f.at(0, 0), f.at(0, 2)), SuboptimalityFactor(2.0), {}).found());
}

TEST_CASE("start blocked at time zero has no path") {
  Fixture f({"..."});
  f.constraints.add(Constraint::vertex(0, f.at(0, 0), 0));
  CHECK_FALSE(shortest_path_search(f.query(f.at(0, 0), f.at(0, 2))).found());
}

TEST_CASE("shortest path matches time-expanded search on random queries") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    CAPTURE(trial);
    const GridMap map = tapf::testing::random_map(5, 5, 20, 100 + trial);
    auto graph = std::make_shared<const GridGraph>(map);
    if (graph->vertex_count() < 2) continue;
    DistanceCache distances(graph);
    ConstraintSet cs;
    const auto& vs = graph->vertices();
    auto pick = [&] { return vs[uniform_below(rng, vs.size())]; };
    const int count = static_cast<int>(uniform_below(rng, 8));
    for (int c = 0; c < count; ++c) {
      const int t = 1 + static_cast<int>(uniform_below(rng, 8));
      const VertexId v = pick();
      if (uniform_below(rng, 2) == 0 || graph->neighbors(v).empty()) {
        cs.add(Constraint::vertex(0, v, t));
      } else {
        const auto& nb = graph->neighbors(v);
        cs.add(Constraint::edge(0, v, nb[uniform_below(rng, nb.size())], t));
      }
    }
    const VertexId s = pick();
    const VertexId g = pick();
    const LowLevelQuery q{*graph, distances, s, g, cs, 0, nullptr};
    const auto exact = shortest_path_search(q);
    const Cost oracle = tapf::testing::time_expanded_bfs(*graph, s, g, cs, 0, search_horizon(*graph, cs, 0));
    CHECK(exact.cost == oracle);
    if (!exact.found()) continue;
    CHECK(path_satisfies(*graph, *exact.path, s, g, cs, 0));
    CHECK(path_cost(*exact.path) == exact.cost);

    for (double wv : {1.0, 1.5, 2.0}) {
      const SuboptimalityFactor w(wv);
      const auto focal = focal_search(q, w, {});
      REQUIRE(focal.found());
      CHECK(focal.lb <= exact.cost);
      CHECK(focal.cost >= exact.cost);
      CHECK(w.admits(focal.cost, focal.lb));
      CHECK(path_satisfies(*graph, *focal.path, s, g, cs, 0));
      if (w.is_optimal()) CHECK(focal.cost == exact.cost);

      const auto bounded = search_with_lb(q, w, exact.cost, {});
      REQUIRE(bounded.found());
      CHECK(bounded.cost <= w.bound(exact.cost));
      CHECK(bounded.lb == exact.cost);
      CHECK(path_satisfies(*graph, *bounded.path, s, g, cs, 0));
    }
  }
}

TEST_CASE("bounded searches prefer a conflict-free detour") {
  // The other agent steps through (0,1) at t=1.
  Fixture f({"...", "..."});
  const Path other{f.at(1, 1), f.at(0, 1), f.at(1, 1)};
  const ConflictCounter counter(*f.graph, {&other});
  const VertexId s = f.at(0, 0);
  const VertexId g = f.at(0, 2);
  const SuboptimalityFactor w(1.5);
  CHECK(min_conflicts_within(f, s, g, 2, counter) == 1);
  CHECK(min_conflicts_within(f, s, g, 3, counter) == 0);

  const auto focal = focal_search(f.query(s, g), w, counter);
  CHECK(focal.lb == 2);
  CHECK(focal.cost == 3);
  CHECK(path_conflicts(*focal.path, counter) == 0);

  const auto bounded = search_with_lb(f.query(s, g), w, 2, counter);
  CHECK(bounded.cost == 3);
  CHECK(path_conflicts(*bounded.path, counter) == 0);

  SUBCASE("w = 1 keeps the optimal cost") {
    const auto tight = search_with_lb(f.query(s, g), SuboptimalityFactor(1.0), 2, counter);
    CHECK(tight.cost == 2);
    CHECK(path_conflicts(*tight.path, counter) == 1);
  }
}

TEST_CASE("search_with_lb minimises conflicts within the bound") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    CAPTURE(trial);
    Fixture f({"....", ".@..", "...."});
    const auto& vs = f.graph->vertices();
    auto pick = [&] { return vs[uniform_below(rng, vs.size())]; };
    // Two random walkers as the conflict context.
    std::vector<Path> others(2);
    for (auto& p : others) {
      p.push_back(pick());
      for (int t = 0; t < 4; ++t) {
        const auto& nb = f.graph->neighbors(p.back());
        p.push_back(nb[uniform_below(rng, nb.size())]);
      }
    }
    const ConflictCounter counter(*f.graph, {&others[0], &others[1]});
    const VertexId s = pick();
    const VertexId g = pick();
    const Cost opt = shortest_path_search(f.query(s, g)).cost;
    const SuboptimalityFactor w(1.5);
    const auto r = search_with_lb(f.query(s, g), w, opt, counter);
    REQUIRE(r.found());
    const Cost bound = std::max<Cost>(w.bound(opt), opt);
    CHECK(path_conflicts(*r.path, counter) == min_conflicts_within(f, s, g, bound, counter));
  }
}

TEST_CASE("search_with_lb propagates an infinite bound") {
  Fixture f({"..."});
  const auto r = search_with_lb(f.query(f.at(0, 0), f.at(0, 2)), SuboptimalityFactor(2.0), kInfiniteCost, {});
  CHECK_FALSE(r.found());
  CHECK_FALSE(is_finite(r.cost));
}

TEST_CASE("conflict counter sees vertices, parked agents and swaps") {
  Fixture f({"...."});
  const Path other{f.at(0, 2), f.at(0, 1)};
  const ConflictCounter counter(*f.graph, {&other});
  CHECK(counter.count(-1, f.at(0, 2), 0) == 1);
  CHECK(counter.count(f.at(0, 0), f.at(0, 1), 1) == 1);
  CHECK(counter.count(f.at(0, 0), f.at(0, 1), 9) == 1);
  CHECK(counter.count(f.at(0, 1), f.at(0, 2), 1) == 1);
  CHECK(counter.count(f.at(0, 3), f.at(0, 2), 1) == 0);
  CHECK(counter.count(f.at(0, 1), f.at(0, 0), 1) == 0);
  CHECK(ConflictCounter().empty());
}

TEST_CASE("constraint set lookups") {
  ConstraintSet cs;
  CHECK(cs.empty());
  cs.add(Constraint::vertex(1, 5, 3));
  cs.add(Constraint::edge(1, 5, 6, 7));
  cs.add(Constraint::vertex(0, 2, 2));
  CHECK(cs.size() == 3);
  CHECK(cs.blocked_vertex(1, 5, 3));
  CHECK_FALSE(cs.blocked_vertex(1, 5, 4));
  CHECK_FALSE(cs.blocked_vertex(0, 5, 3));
  CHECK(cs.blocked_edge(1, 5, 6, 7));
  CHECK_FALSE(cs.blocked_edge(1, 6, 5, 7));
  CHECK(cs.latest_time(1) == 7);
  CHECK(cs.latest_time(0) == 2);
  CHECK(cs.latest_time(4) == 0);
  CHECK(cs.contains(Constraint::vertex(0, 2, 2)));
  CHECK(cs.for_agent(3).empty());

  const AgentConstraintTable table(cs, 1, 16);
  CHECK(table.blocks_vertex(5, 3));
  CHECK(table.blocks_edge(5, 6, 7));
  CHECK(table.latest_time() == 7);
  CHECK(table.earliest_rest_time(5) == 4);
  CHECK(table.earliest_rest_time(9) == 0);
}

TEST_CASE("suboptimality factor compares exactly") {
  const SuboptimalityFactor w(1.1);
  CHECK(w.admits(11, 10));
  CHECK_FALSE(w.admits(12, 10));
  CHECK(w.bound(10) == 11);
  CHECK(w.bound(9) == 9);
  CHECK(SuboptimalityFactor(1.05).bound(20) == 21);
  CHECK(SuboptimalityFactor(2.0).admits(8, 4));
  CHECK_FALSE(SuboptimalityFactor(2.0).admits(9, 4));
  CHECK(SuboptimalityFactor().is_optimal());
  CHECK_THROWS(SuboptimalityFactor(0.99));
}

TEST_CASE("expired deadline aborts a search") {
  Fixture f(std::vector<std::string>(30, std::string(30, '.')));
  const Deadline expired(0.0);
  LowLevelQuery q{*f.graph, f.distances, f.at(0, 0), f.at(29, 29), f.constraints, 0, &expired};
  for (int t = 1; t < 2000; ++t) f.constraints.add(Constraint::vertex(0, f.at(29, 29), t));
  CHECK_THROWS_AS(shortest_path_search(q), SearchTimeout);
}
