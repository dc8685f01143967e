#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mvpois/er_moments.hpp"
#include "mvpois/er_simulator.hpp"
#include "mvpois/errors.hpp"
#include "mvpois/stats.hpp"
#include "support/oracles.hpp"

using namespace mvpois;

namespace {

oracle::Pattern as_oracle(const PatternGraph& h) { return oracle::Pattern(h.edges().begin(), h.edges().end()); }

SampledGraph from_edges(std::size_t n, const EdgeList& edges) {
  SampledGraph g(n);
  for (auto [a, b] : edges) g.add_edge(a, b);
  return g;
}

std::vector<std::vector<char>> adjacency(const SampledGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (auto [a, b] : g.edges()) adj[a][b] = adj[b][a] = 1;
  return adj;
}

}  // namespace

TEST_SUITE("er_simulator") {

TEST_CASE("graph container") {
  SampledGraph g(4);
  CHECK(g.add_edge(0, 1));
  CHECK_FALSE(g.add_edge(1, 0));
  CHECK(g.has_edge(1, 0));
  CHECK(g.edge_count() == 1);
  g.remove_edge(0, 1);
  CHECK(g.edge_count() == 0);
  CHECK_FALSE(g.has_edge(0, 1));
  g.add_edge(2, 3);
  CHECK(g.to_edge_list_text() == "4 1\n3 4\n");
}

TEST_CASE("sampling") {
  CHECK_THROWS_AS(sample_gnp(5, 0.0, 1), ParameterError);
  CHECK_THROWS_AS(sample_gnp(5, 1.0, 1), ParameterError);
  CHECK(sample_gnp(30, 0.2, 9).edges() == sample_gnp(30, 0.2, 9).edges());

  const double p = 0.3;
  const int trials = 100000;
  int hits = 0;
  for (int t = 0; t < trials; ++t) hits += sample_gnp(2, p, static_cast<std::uint64_t>(t)).edge_count() == 1;
  const double se = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(hits / static_cast<double>(trials) - p) <= 3 * se);

  RunningStats edges;
  for (int t = 0; t < 5000; ++t) edges.add(static_cast<double>(sample_gnp(25, 0.1, 1000 + t).edge_count()));
  CHECK(std::abs(edges.mean() - 300 * 0.1) <= 3 * edges.standard_error());
}

TEST_CASE("counting examples") {
  SampledGraph k4(4);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) k4.add_edge(a, b);
  }
  CHECK(count_copies_joint(k4, {PatternGraph::cycle(3)}) == std::vector<std::int64_t>{4});
  SampledGraph empty(6);
  CHECK(count_copies_joint(empty, {PatternGraph::edge(), PatternGraph::cycle(3), PatternGraph::path(2)}) ==
        std::vector<std::int64_t>{0, 0, 0});
  auto c5 = from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
  CHECK(count_copies_joint(c5, {PatternGraph::cycle(5), PatternGraph::path(2)}) == std::vector<std::int64_t>{1, 5});
}

TEST_CASE("counting against unpruned injections") {
  const std::vector<PatternGraph> ps{PatternGraph::edge(),     PatternGraph::path(2), PatternGraph::cycle(3),
                                     PatternGraph::cycle(4),   PatternGraph::star(3), PatternGraph::complete(4),
                                     PatternGraph::path(3)};
  SubgraphCounter counter(ps);
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 4 + rep % 4;
    auto g = sample_gnp(n, 0.25 + 0.5 * (rep % 3) / 2.0, rng);
    auto adj = adjacency(g);
    auto counts = counter.count(g);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const auto inj = oracle::injections(as_oracle(ps[i]), adj);
      CHECK(counts[i] * static_cast<std::int64_t>(automorphism_count(ps[i])) == static_cast<std::int64_t>(inj));
    }
  }
}

TEST_CASE("graph coupling") {
  const std::vector<PatternGraph> ps{PatternGraph::cycle(3), PatternGraph::cycle(4)};
  SubgraphCounter counter(ps);
  SUBCASE("forced copy already present") {
    SampledGraph kn(4);
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) kn.add_edge(a, b);
    }
    Rng rng(1);
    auto row = graph_coupling(kn, counter, 1, rng);
    CHECK(row.added_edges == 0);
    CHECK(row.w_tilde == row.w);
    CHECK(kn.edge_count() == 6);
  }
  SUBCASE("increasing") {
    for (int t = 0; t < 10000; ++t) {
      Rng rng = substream(99, static_cast<std::uint64_t>(t));
      auto g = sample_gnp(8, 0.3, rng);
      const std::size_t i = static_cast<std::size_t>(t % 2);
      auto row = graph_coupling(g, counter, i, rng);
      REQUIRE(row.w_tilde.size() == i + 1);
      CHECK(row.w_tilde[i] >= 1);
      for (std::size_t j = 0; j <= i; ++j) CHECK(row.w_tilde[j] >= row.w[j]);
      for (auto [a, b] : row.forced_copy) CHECK(a != b);
    }
  }
}

TEST_CASE("exhaustive law of the graph coupling") {
  for (double p : {0.3, 0.7}) {
    GraphIndicatorModel model({PatternGraph::edge()}, 4, p);
    CHECK(model.block_size(0) == 6);
    CHECK(verify_size_biased_exact(model) < 1e-12);
  }
  GraphIndicatorModel joint({PatternGraph::path(2), PatternGraph::cycle(3)}, 4, 0.4);
  CHECK(verify_size_biased_exact(joint) < 1e-12);
  spot_check_monotone(joint, CouplingDirection::kIncreasing, 500, 3);
  GraphIndicatorModel big({PatternGraph::edge()}, 8, 0.5);
  CHECK_THROWS_AS(verify_size_biased_exact(big), ResourceError);
}

TEST_CASE("coupling terms by Monte Carlo") {
  SUBCASE("edge identity") {
    GraphEnsembleSpec s{12, 0.2, {PatternGraph::edge()}};
    auto m = moments(s);
    auto r = mc_coupling_terms(s, 4000, 8);
    const double target = m.variance[0] - m.lambda[0] + 2 * m.lambda[0] * 0.2;
    // W~ - 1 - W = -X_alpha for a single edge, so the absolute term is p.
    CHECK(r.diag_terms[0] == doctest::Approx(0.2).epsilon(0.1));
    CHECK(std::abs(m.lambda[0] * r.diag_terms[0] - target) <= 3 * m.lambda[0] * r.diag_stderr[0] + 1e-12);
  }
  SUBCASE("single possible copy") {
    GraphEnsembleSpec s{2, 0.4, {PatternGraph::edge()}};
    auto r = mc_coupling_terms(s, 500, 2);
    // |W~ - 1 - W| = X, so the term is the edge probability; W~ itself is 1.
    CHECK(r.diag_shift[0] == doctest::Approx(1.0 - r.diag_terms[0]));
  }
  SUBCASE("deterministic given the seed") {
    GraphEnsembleSpec s{10, 0.3, {PatternGraph::cycle(3), PatternGraph::path(2)}};
    auto a = mc_coupling_terms(s, 300, 4);
    auto b = mc_coupling_terms(s, 300, 4);
    CHECK(a.total == b.total);
    CHECK(a.cross_terms == b.cross_terms);
  }
}

TEST_CASE("empirical distances") {
  SUBCASE("sparse graphs sit at the origin") {
    GraphEnsembleSpec s{10, 1e-8, {PatternGraph::edge()}};
    DistanceOptions opt;
    opt.bootstrap = 20;
    auto d = mc_empirical_distance(s, 2000, 3, opt);
    const double lam = 45e-8;
    // W_1 from the origin to Poisson(lam) is its mean.
    CHECK(std::abs(d.dw - lam) <= d.dw_budget + 1e-12);
  }
  SUBCASE("Poisson samples against their own law") {
    std::vector<double> lam{0.8, 1.5};
    std::vector<LatticePoint> samples;
    Rng rng(12);
    std::poisson_distribution<int> p0(lam[0]);
    std::poisson_distribution<int> p1(lam[1]);
    for (int t = 0; t < 20000; ++t) samples.push_back({p0(rng), p1(rng)});
    DistanceOptions opt;
    opt.bootstrap = 50;
    auto d = empirical_distance(samples, lam, 7, opt);
    CHECK(d.dw < 0.05);
    CHECK(d.dw_replicates.size() == 50);
    CHECK(d.dw_stderr > 0.0);
  }
  SUBCASE("cycles respect the t4 bound") {
    GraphEnsembleSpec s{40, 1.0 / 40, {PatternGraph::cycle(3), PatternGraph::cycle(4)}};
    auto m = moments(s);
    DistanceOptions opt;
    opt.bootstrap = 20;
    auto d = mc_empirical_distance(s, 10000, 5, opt);
    CHECK(d.dw <= bound_t4(s, m).value + d.dw_budget);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(d.sample_mean[i] - m.lambda[i]) <= 3 * d.sample_mean_stderr[i]);
  }
}

TEST_CASE("rate sweep bookkeeping") {
  DistanceOptions opt;
  opt.bootstrap = 10;
  auto r = rate_sweep({PatternGraph::cycle(3)}, 1.0, 1.0, {40, 20, 30, 20}, 500, 11, opt);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].n == 20);
  CHECK(r.rows[2].n == 40);
  CHECK(r.fitted);
  auto two = rate_sweep({PatternGraph::cycle(3)}, 1.0, 1.0, {20, 40}, 200, 11, opt);
  CHECK_FALSE(two.fitted);
  auto off = rate_sweep({PatternGraph::edge()}, 1.0, 1.0, {20, 30, 40}, 200, 11, opt);
  CHECK_FALSE(off.warnings.empty());
}

TEST_CASE("tails") {
  GraphEnsembleSpec s{60, 1.0 / 60, {PatternGraph::edge()}};
  auto t = relative_tail(s, 0, 0.1, 4000, 21);
  auto m = moments(s);
  CHECK(t.chebyshev == doctest::Approx(m.variance[0] / (0.01 * m.lambda[0] * m.lambda[0])));
  CHECK(std::abs(t.mean - m.lambda[0]) <= 3 * t.mean_stderr);
  CHECK(t.frequency <= 1.0);
}

}  // TEST_SUITE
