#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "mvpois/errors.hpp"
#include "mvpois/graph_patterns.hpp"
#include "mvpois/stats.hpp"
#include "support/oracles.hpp"

using namespace mvpois;

namespace {

oracle::Pattern as_oracle(const PatternGraph& h) { return oracle::Pattern(h.edges().begin(), h.edges().end()); }

// Ordered copy pairs in K_n by shared edge count, plus the fewest vertices
// incident to the shared edges for non-identical pairs.
struct BrutePairs {
  std::map<std::size_t, double> by_k;
  std::map<std::size_t, std::size_t> min_incident;
};

BrutePairs brute_pairs(const PatternGraph& hi, const PatternGraph& hj, int n) {
  auto ci = oracle::copies_in_kn(as_oracle(hi), n);
  auto cj = oracle::copies_in_kn(as_oracle(hj), n);
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) pairs.push_back({a, b});
  }
  BrutePairs out;
  for (auto a : ci) {
    for (auto b : cj) {
      const std::uint64_t shared = a & b;
      const auto k = static_cast<std::size_t>(std::popcount(shared));
      out.by_k[k] += 1.0;
      if (k == 0 || a == b) continue;
      std::set<int> verts;
      for (std::size_t t = 0; t < pairs.size(); ++t) {
        if ((shared >> t) & 1u) {
          verts.insert(pairs[t].first);
          verts.insert(pairs[t].second);
        }
      }
      auto it = out.min_incident.find(k);
      if (it == out.min_incident.end() || verts.size() < it->second) out.min_incident[k] = verts.size();
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("graph_patterns") {

TEST_CASE("construction and parsing") {
  CHECK_THROWS_AS(PatternGraph(3, {{0, 0}, {1, 2}}), ParameterError);
  CHECK_THROWS_AS(PatternGraph(3, {{0, 1}, {1, 0}, {1, 2}}), ParameterError);
  CHECK_THROWS_AS(PatternGraph(4, {{0, 1}, {1, 2}}), ParameterError);
  auto tri = PatternGraph::parse("triangle");
  CHECK(tri.vertex_count() == 3);
  CHECK(tri.edge_count() == 3);
  auto p = PatternGraph::parse("path_2");
  CHECK(p.vertex_count() == 3);
  CHECK(p.edge_count() == 2);
  auto s = PatternGraph::parse("star_3");
  CHECK(s.vertex_count() == 4);
  CHECK(PatternGraph::parse("complete_4").edge_count() == 6);
  auto custom = PatternGraph::parse("v=4; edges=1-2,2-3,3-4,4-1");
  CHECK(isomorphic(custom, PatternGraph::cycle(4)));
  CHECK(describe(custom) == "v=4; edges=1-2,1-4,2-3,3-4");
  CHECK_THROWS_AS(PatternGraph::parse("hexagon"), ParameterError);
  try {
    PatternGraph::parse("v=3; edges=1-2,2-x");
    FAIL("no error");
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("column 18") != std::string::npos);
  }
  CHECK_THROWS_AS(PatternGraph::parse("v=3; edges=1-5"), ParameterError);
  auto list = parse_pattern_list("cycle_3,cycle_4|v=2; edges=1-2");
  REQUIRE(list.size() == 3);
  CHECK(list[2].edge_count() == 1);
}

TEST_CASE("automorphisms") {
  CHECK(automorphism_count(PatternGraph::parse("triangle")) == 6);
  CHECK(automorphism_count(PatternGraph::path(2)) == 2);
  CHECK(automorphism_count(PatternGraph::cycle(4)) == 8);
  CHECK(automorphism_count(PatternGraph::complete(4)) == 24);
  CHECK(automorphism_count(PatternGraph::star(3)) == 6);
  CHECK_THROWS_AS(automorphism_count(PatternGraph::cycle(11)), ResourceError);
  for (std::size_t k = 3; k <= 7; ++k) {
    auto h = PatternGraph::cycle(k);
    CHECK(automorphism_count(h) == 2 * k);
    std::uint64_t fact = 1;
    for (std::size_t x = 2; x <= k; ++x) fact *= x;
    CHECK(fact % automorphism_count(h) == 0);
    CHECK(labeled_copies(h).size() == fact / automorphism_count(h));
  }
}

TEST_CASE("density and balance") {
  auto tri = density_and_balance(PatternGraph::parse("triangle"));
  CHECK(tri.density == doctest::Approx(1.0));
  CHECK(tri.strictly_balanced);
  REQUIRE(tri.witness);
  CHECK(isomorphic(*tri.witness, PatternGraph::edge()));

  PatternGraph two(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  auto tt = density_and_balance(two);
  CHECK(tt.density == doctest::Approx(1.0));
  CHECK_FALSE(tt.strictly_balanced);
  REQUIRE(tt.witness);
  CHECK(isomorphic(*tt.witness, PatternGraph::cycle(3)));

  auto k4 = density_and_balance(PatternGraph::complete(4));
  CHECK(k4.density == doctest::Approx(1.5));
  CHECK(k4.strictly_balanced);
  REQUIRE(k4.witness);
  CHECK(isomorphic(*k4.witness, PatternGraph::cycle(3)));

  CHECK_FALSE(density_and_balance(PatternGraph::edge()).witness);
}

TEST_CASE("gamma and eta") {
  auto tri = PatternGraph::parse("triangle");
  auto g = gamma_eta(tri, 1.0);
  CHECK(g.gamma_subgraph == doctest::Approx(1.0));
  for (std::size_t k = 3; k <= 7; ++k) CHECK(gamma_eta(PatternGraph::cycle(k), 1.0).gamma_subgraph == doctest::Approx(1.0));
  CHECK(gamma_eta(tri, 0.5).eta == doctest::Approx(3.0));
  // Identical copies pull the full variant to zero at the critical density.
  REQUIRE(g.gamma_overlap_full);
  CHECK(*g.gamma_overlap_full == doctest::Approx(0.0));
  REQUIRE(g.gamma_overlap);
  CHECK(*g.gamma_overlap == doctest::Approx(1.0));

  for (const auto& h : {PatternGraph::cycle(4), PatternGraph::complete(4), PatternGraph::path(3), PatternGraph::star(3)}) {
    const auto db = density_and_balance(h);
    const double gs = gamma_eta(h, db.density).gamma_subgraph;
    if (db.strictly_balanced) {
      CHECK(gs > 0.0);
    } else {
      CHECK(gs <= 1e-12);
    }
  }
  PatternGraph two(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  CHECK(gamma_eta(two, 1.0).gamma_subgraph <= 1e-12);
}

TEST_CASE("copy enumeration") {
  CHECK(enumerate_copies(PatternGraph::parse("triangle"), 5).size() == 10);
  CHECK(enumerate_copies(PatternGraph::edge(), 4).size() == 6);
  CHECK(enumerate_copies(PatternGraph::cycle(4), 4).size() == 3);
  for (const auto& h : {PatternGraph::path(2), PatternGraph::cycle(4), PatternGraph::star(3), PatternGraph::complete(4)}) {
    for (std::size_t n : {4u, 5u, 7u}) {
      const auto copies = enumerate_copies(h, n);
      const double expected = binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(h.vertex_count())) *
                              static_cast<double>(labeled_copies(h).size());
      CHECK(static_cast<double>(copies.size()) == expected);
      CHECK(copies.size() == oracle::copies_in_kn(as_oracle(h), static_cast<int>(n)).size());
    }
  }
  CHECK_THROWS_AS(enumerate_copies(PatternGraph::edge(), 13), ResourceError);
}

TEST_CASE("overlap tables") {
  SUBCASE("edge with itself") {
    auto t = overlap_table(PatternGraph::edge(), PatternGraph::edge());
    CHECK(t.count(1, 2) == 1);
    CHECK(t.identical.at({1, 2}) == 1);
    CHECK(t.total_pairs(5) == doctest::Approx(100.0));
  }
  SUBCASE("triangles") {
    auto tri = PatternGraph::parse("triangle");
    auto t = overlap_table(tri, tri);
    CHECK(t.count(3, 3) == 1);
    CHECK(t.count(2, 3) == 0);
    CHECK(t.count(2, 4) == 0);
    auto stats = shared_edge_stats(t);
    CHECK(stats.max_shared == 1);
    CHECK(stats.ell.at(1) == 2);
    auto full = shared_edge_stats(t, true);
    CHECK(full.max_shared == 3);
    CHECK(full.ell.at(3) == 3);
  }
  SUBCASE("triangle and square") {
    auto t = overlap_table(PatternGraph::cycle(4), PatternGraph::cycle(3));
    for (const auto& [key, value] : t.entries) {
      if (key.first >= 3) CHECK(value == 0);
    }
  }
  SUBCASE("cap") {
    CHECK_THROWS_AS(overlap_table(PatternGraph::cycle(7), PatternGraph::cycle(6)), ResourceError);
  }
}

TEST_CASE("overlap tables against copy pairs in K_n") {
  const std::vector<std::pair<PatternGraph, PatternGraph>> cases{
      {PatternGraph::edge(), PatternGraph::edge()},
      {PatternGraph::cycle(3), PatternGraph::cycle(3)},
      {PatternGraph::cycle(4), PatternGraph::cycle(3)},
      {PatternGraph::path(2), PatternGraph::edge()},
      {PatternGraph::star(3), PatternGraph::path(2)},
  };
  for (const auto& [hi, hj] : cases) {
    const auto table = overlap_table(hi, hj);
    const int top = static_cast<int>(hi.vertex_count() + hj.vertex_count());
    for (int n : {top - 1, top}) {
      auto brute = brute_pairs(hi, hj, n);
      std::map<std::size_t, double> from_table;
      for (const auto& [key, count] : table.entries) {
        if (key.second <= static_cast<std::size_t>(n)) {
          from_table[key.first] += static_cast<double>(count) * binomial(n, static_cast<std::int64_t>(key.second));
        }
      }
      for (const auto& [k, v] : brute.by_k) CHECK(from_table[k] == doctest::Approx(v));
      double all = 0.0;
      for (const auto& [k, v] : brute.by_k) all += v;
      if (n >= top) CHECK(table.total_pairs(static_cast<std::size_t>(n)) == doctest::Approx(all));
    }
    // n = v_i + v_j realizes every overlap pattern, so the minima must agree.
    auto brute = brute_pairs(hi, hj, top);
    auto stats = shared_edge_stats(table);
    for (const auto& [k, l] : brute.min_incident) CHECK(stats.ell.at(k) == l);
  }
}

TEST_CASE("shared edge statistics") {
  for (std::size_t ki = 3; ki <= 5; ++ki) {
    for (std::size_t kj = ki + 1; kj <= 6; ++kj) {
      auto stats = shared_edge_stats(PatternGraph::cycle(kj), PatternGraph::cycle(ki));
      CHECK(stats.max_shared == ki - 1);
      std::size_t prev = 0;
      for (std::size_t k = 1; k < ki; ++k) {
        CHECK(stats.ell.at(k) == k + 1);
        CHECK(stats.ell.at(k) >= prev);
        prev = stats.ell.at(k);
      }
    }
  }
  const std::vector<PatternGraph> zoo{PatternGraph::edge(), PatternGraph::path(2), PatternGraph::cycle(3),
                                      PatternGraph::cycle(4), PatternGraph::star(3), PatternGraph::complete(4)};
  for (std::size_t a = 0; a < zoo.size(); ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      if (zoo[a].vertex_count() + zoo[b].vertex_count() > 12) continue;
      auto table = overlap_table(zoo[a], zoo[b]);
      for (bool incl : {false, true}) {
        auto s = shared_edge_stats(table, incl);
        std::set<std::size_t> feasible(s.feasible.begin(), s.feasible.end());
        std::set<std::size_t> positive;
        for (const auto& [k, l] : s.ell) {
          if (l > 0) positive.insert(k);
        }
        CHECK(feasible == positive);
        for (auto k : s.feasible) {
          const std::size_t l = s.ell.at(k);
          CHECK(l <= 2 * k);
          CHECK(k <= l * (l - 1) / 2);
        }
        // Any two patterns without isolated vertices can share one edge,
        // except two single edges, whose only overlap is the identical pair.
        if (zoo[a].edge_count() > 1 || zoo[b].edge_count() > 1 || incl) CHECK(feasible.count(1) == 1);
      }
    }
  }
}

TEST_CASE("relabel") {
  EdgeList copy{{0, 1}, {1, 2}};
  auto r = relabel(copy, {4, 2, 7});
  CHECK(r == EdgeList{{2, 4}, {2, 7}});
  CHECK(pair_index(1, 0) == 0);
  CHECK(pair_index(2, 3) == pair_index(3, 2));
}

}  // TEST_SUITE
