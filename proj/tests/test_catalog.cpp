#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <queue>

#include "catalog.hpp"
#include "test_helpers.hpp"

using namespace spansim;

namespace {

GraphSpec path_graph(int vertices) {
  GraphSpec g;
  g.vertices = vertices;
  for (int i = 0; i + 1 < vertices; ++i) g.edges.emplace_back(i, i + 1);
  g.s = 0;
  g.t = vertices - 1;
  return g;
}

GraphSpec parallel_graph(int count) {
  GraphSpec g;
  g.vertices = 2;
  for (int i = 0; i < count; ++i) g.edges.emplace_back(0, 1);
  g.s = 0;
  g.t = 1;
  return g;
}

GraphSpec complete4() {
  GraphSpec g;
  g.vertices = 4;
  for (int u = 0; u < 4; ++u) {
    for (int v = u + 1; v < 4; ++v) g.edges.emplace_back(u, v);
  }
  g.s = 0;
  g.t = 3;
  return g;
}

// BFS length of the shortest present path, or -1 when disconnected.
int shortest_present_path(const GraphSpec& g, const std::string& x) {
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(g.vertices));
  for (std::size_t j = 0; j < g.edges.size(); ++j) {
    if (x[j] != '1') continue;
    adjacency[static_cast<std::size_t>(g.edges[j].first)].push_back(g.edges[j].second);
    adjacency[static_cast<std::size_t>(g.edges[j].second)].push_back(g.edges[j].first);
  }
  std::vector<int> dist(static_cast<std::size_t>(g.vertices), -1);
  std::queue<int> frontier;
  dist[static_cast<std::size_t>(g.s)] = 0;
  frontier.push(g.s);
  while (!frontier.empty()) {
    const int at = frontier.front();
    frontier.pop();
    for (int next : adjacency[static_cast<std::size_t>(at)]) {
      if (dist[static_cast<std::size_t>(next)] == -1) {
        dist[static_cast<std::size_t>(next)] = dist[static_cast<std::size_t>(at)] + 1;
        frontier.push(next);
      }
    }
  }
  return dist[static_cast<std::size_t>(g.t)];
}

// Potential edges crossing the s-side component of the present subgraph.
int boundary_cut_size(const GraphSpec& g, const std::string& x) {
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(g.vertices));
  for (std::size_t j = 0; j < g.edges.size(); ++j) {
    if (x[j] != '1') continue;
    adjacency[static_cast<std::size_t>(g.edges[j].first)].push_back(g.edges[j].second);
    adjacency[static_cast<std::size_t>(g.edges[j].second)].push_back(g.edges[j].first);
  }
  std::vector<char> on_s_side(static_cast<std::size_t>(g.vertices), 0);
  std::queue<int> frontier;
  on_s_side[static_cast<std::size_t>(g.s)] = 1;
  frontier.push(g.s);
  while (!frontier.empty()) {
    const int at = frontier.front();
    frontier.pop();
    for (int next : adjacency[static_cast<std::size_t>(at)]) {
      if (!on_s_side[static_cast<std::size_t>(next)]) {
        on_s_side[static_cast<std::size_t>(next)] = 1;
        frontier.push(next);
      }
    }
  }
  int crossing = 0;
  for (const auto& [u, v] : g.edges) {
    if (on_s_side[static_cast<std::size_t>(u)] != on_s_side[static_cast<std::size_t>(v)]) {
      ++crossing;
    }
  }
  return crossing;
}

}  // namespace

TEST_CASE("OR witnesses: 1/M for marked inputs and n for the empty input") {
  for (int n : {1, 2, 5, 8}) {
    const SpanProgram p = build_or(n);
    for (const std::string& x : p.all_inputs()) {
      const int marked = static_cast<int>(std::count(x.begin(), x.end(), '1'));
      const Witness w = witness(p, x);
      if (marked > 0) {
        CHECK(w.kind == Witness::Kind::positive);
        CHECK(w.size == doctest::Approx(1.0 / marked).epsilon(1e-8));
      } else {
        CHECK(w.kind == Witness::Kind::negative);
        CHECK(w.size == doctest::Approx(static_cast<double>(n)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("series and parallel resistance laws") {
  for (int k : {1, 2, 3, 5}) {
    const GraphSpec path = path_graph(k + 1);
    const std::string all_present(static_cast<std::size_t>(k), '1');
    CHECK(effective_resistance(path, all_present) == doctest::Approx(k).epsilon(1e-9));

    const GraphSpec par = parallel_graph(k);
    CHECK(effective_resistance(par, all_present) == doctest::Approx(1.0 / k).epsilon(1e-9));
  }
  CHECK(std::isinf(effective_resistance(path_graph(3), "10")));
}

TEST_CASE("parallel st edges give positive witness one half") {
  const SpanProgram p = build_stconn(parallel_graph(2));
  const auto w = positive_witness(p, "11");
  REQUIRE(w.has_value());
  CHECK(w->size == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("no present edges leaves only a negative witness") {
  const SpanProgram p = build_stconn(path_graph(4));
  const Witness w = witness(p, "000");
  CHECK(w.kind == Witness::Kind::negative);
}

TEST_CASE("graph validation rejects self-loops and bad terminals") {
  GraphSpec g;
  g.vertices = 3;
  g.edges = {{0, 0}};
  g.s = 0;
  g.t = 1;
  CHECK_THROWS_AS(g.validate(), InvalidInput);
  g.edges = {{0, 1}};
  g.t = 0;
  CHECK_THROWS_AS(g.validate(), InvalidInput);
}

TEST_CASE("positive witness sizes equal effective resistance exhaustively") {
  for (const GraphSpec& g : {path_graph(4), complete4(), parallel_graph(3)}) {
    const SpanProgram p = build_stconn(g);
    for (const std::string& x : p.all_inputs()) {
      const double resistance = effective_resistance(g, x);
      const auto w = positive_witness(p, x);
      if (std::isinf(resistance)) {
        CHECK_FALSE(w.has_value());
      } else {
        REQUIRE(w.has_value());
        CHECK(w->size == doctest::Approx(resistance).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("resistance is bounded by the shortest present path") {
  for (const GraphSpec& g : {path_graph(4), complete4()}) {
    for (const std::string& x : all_inputs(static_cast<int>(g.edges.size()), 2)) {
      const int hops = shortest_present_path(g, x);
      if (hops < 0) continue;
      CHECK(effective_resistance(g, x) <= hops + 1e-9);
    }
  }
}

TEST_CASE("negative witness sizes are bounded by the boundary cut") {
  for (const GraphSpec& g : {path_graph(4), complete4()}) {
    const SpanProgram p = build_stconn(g);
    for (const std::string& x : p.all_inputs()) {
      if (shortest_present_path(g, x) >= 0) continue;
      const auto w = negative_witness(p, x);
      REQUIRE(w.has_value());  // a cut exists, so the witness is finite
      CHECK(w->size <= boundary_cut_size(g, x) + 1e-8);
    }
  }
}
