#include <cmath>
#include <vector>

#include "doctest.h"
#include "mvpois/errors.hpp"
#include "mvpois/hypergeometric.hpp"
#include "mvpois/moments.hpp"
#include "mvpois/stats.hpp"
#include "support/oracles.hpp"

using namespace mvpois;

TEST_SUITE("hypergeometric") {

TEST_CASE("urn validation") {
  CHECK_THROWS_AS(UrnSpec::make({}, 1), ParameterError);
  CHECK_THROWS_AS(UrnSpec::make({2, 0}, 1), ParameterError);
  CHECK_THROWS_AS(UrnSpec::make({2, 3}, 0), ParameterError);
  CHECK_THROWS_AS(UrnSpec::make({2, 3}, 6), ParameterError);
  CHECK_THROWS_AS(UrnSpec::with_background({5}, 2), ParameterError);
  auto u = UrnSpec::with_background({3, 4, 13}, 5);
  CHECK(u.N == 20);
  CHECK(u.dimension() == 2);
}

TEST_CASE("exact pmf") {
  auto two = exact_pmf(UrnSpec::make({1, 1}, 1));
  CHECK(two.mass_at({1, 0}) == doctest::Approx(0.5));
  CHECK(two.mass_at({0, 1}) == doctest::Approx(0.5));
  CHECK(exact_pmf(UrnSpec::make({2, 3, 1}, 6)) == LatticeDistribution::point_mass({2, 3, 1}));

  // Exact enumeration of draws, compared as rationals scaled by C(N, m).
  for (const auto& [colors, m] : std::vector<std::pair<std::vector<int>, int>>{
           {{4, 6}, 3}, {{3, 4, 5}, 5}, {{1, 2, 3, 4}, 4}, {{6, 6}, 6}}) {
    std::vector<std::size_t> c(colors.begin(), colors.end());
    auto urn = UrnSpec::make(c, static_cast<std::size_t>(m));
    auto pmf = exact_pmf(urn);
    auto draws = oracle::urn_draws(colors, m);
    const double total = static_cast<double>(oracle::choose(static_cast<int>(urn.N), m));
    CHECK(pmf.size() == draws.size());
    for (const auto& [k, count] : draws) CHECK(std::abs(pmf.mass_at(k) * total - static_cast<double>(count)) < 1e-9);
  }

  auto big = exact_pmf(UrnSpec::make({10, 20, 970}, 40));
  CHECK(std::abs(big.total_mass() - 1.0) < 1e-12);
  for (const auto& a : big.atoms()) CHECK(a.point[0] + a.point[1] + a.point[2] == 40);
}

TEST_CASE("moments") {
  auto m = moments(UrnSpec::make({1, 1}, 1));
  CHECK(m.lambda[0] == doctest::Approx(0.5));
  CHECK(m.variance[1] == doctest::Approx(0.25));
  CHECK(m.covariance[0][1] == doctest::Approx(-0.25));
  auto full = moments(UrnSpec::make({3, 4}, 7));
  CHECK(full.variance[0] == 0.0);
  CHECK(moments(UrnSpec::make({1}, 1)).variance[0] == 0.0);

  for (const auto& urn : {UrnSpec::make({10, 90}, 5), UrnSpec::make({7, 8, 9, 6}, 12),
                          UrnSpec::with_background({5, 9, 40}, 11)}) {
    auto f = moments(urn);
    auto e = moments_of(exact_pmf(urn));
    for (std::size_t i = 0; i < urn.dimension(); ++i) {
      CHECK(std::abs(f.lambda[i] - e.lambda[i]) < 1e-12);
      for (std::size_t j = 0; j < urn.dimension(); ++j) {
        CHECK(std::abs(f.covariance[i][j] - e.covariance[i][j]) < 1e-12);
        if (i != j) CHECK(f.covariance[i][j] <= 0.0);
      }
    }
  }
}

TEST_CASE("urn bound") {
  SUBCASE("single tracked color") {
    auto urn = UrnSpec::with_background({10, 90}, 10);
    auto b = theorem_bound_urn(urn);
    const double N = 100;
    const double lam = 1.0;
    CHECK(b.value == doctest::Approx(std::min(1.0, lam) * (1 - 90.0 * 90.0 / (N * 99.0))).epsilon(1e-12));
    auto m = moments(urn);
    CHECK(bound_dd(m.lambda, m.variance, m.covariance).value == doctest::Approx(b.value).epsilon(1e-12));
  }
  SUBCASE("full draw is vacuous") {
    auto b = theorem_bound_urn(UrnSpec::make({2, 3}, 5));
    CHECK(b.vacuous);
    CHECK(b.cross_statement == 0.0);
    CHECK(b.value == doctest::Approx(2.0));
  }
  SUBCASE("statement and proof cross terms") {
    for (const auto& urn : {UrnSpec::make({3, 7}, 2), UrnSpec::make({2, 3, 15}, 4),
                            UrnSpec::with_background({5, 7, 8, 980}, 20)}) {
      auto b = theorem_bound_urn(urn);
      CHECK(std::abs(b.cross_statement - b.cross_proof) < 1e-12);
      auto m = moments(urn);
      CHECK(std::abs(bound_dd(m.lambda, m.variance, m.covariance).value - b.value) < 1e-12);
    }
  }
  SUBCASE("background example") {
    auto b = theorem_bound_urn(UrnSpec::with_background({5, 7, 8, 980}, 20));
    CHECK_FALSE(b.vacuous);
    CHECK(b.value < 0.1);
  }
}

TEST_CASE("sampling") {
  auto urn = UrnSpec::make({3, 5, 12}, 6);
  RunningStats mean0;
  for (std::uint64_t s = 0; s < 100000; ++s) {
    auto w = sample_urn(urn, s);
    CHECK(w[0] + w[1] + w[2] == 6);
    mean0.add(static_cast<double>(w[0]));
  }
  CHECK(std::abs(mean0.mean() - 6.0 * 3 / 20) <= 3 * mean0.standard_error());
  auto full = UrnSpec::make({3, 5}, 8);
  CHECK(sample_urn(full, 4) == std::vector<std::int64_t>{3, 5});
  CHECK(sample_urn(urn, 77) == sample_urn(urn, 77));
}

TEST_CASE("urn coupling") {
  auto urn = UrnSpec::make({2, 2}, 2);
  UrnIndicatorModel model(urn);
  CHECK(verify_size_biased_exact(model) < 1e-12);
  CHECK(verify_size_biased_exact(UrnIndicatorModel(UrnSpec::make({1, 2, 3}, 3))) < 1e-12);
  CHECK(verify_size_biased_exact(UrnIndicatorModel(UrnSpec::with_background({2, 1, 3}, 2))) < 1e-12);

  auto big = UrnSpec::make({3, 4, 5}, 4);
  for (std::uint64_t s = 0; s < 10000; ++s) {
    auto run = urn_coupling(big, s);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(run.w_tilde[i][i] >= 1);
      for (std::size_t j = 0; j < i; ++j) CHECK(run.w_tilde[i][j] <= run.w[j]);
    }
  }
  spot_check_monotone(UrnIndicatorModel(big), CouplingDirection::kDecreasing, 1000, 5);
  CHECK_THROWS_AS(spot_check_monotone(UrnIndicatorModel(big), CouplingDirection::kIncreasing, 1000, 5), InvariantError);

  // Ball already drawn: the state is kept.
  ModelState state{1, 0, 1, 0};
  Rng rng(3);
  CHECK(model.couple(state, 0, 0, rng) == state);
}

TEST_CASE("exact Wasserstein comparison") {
  auto tiny = UrnSpec::make({1, 1}, 1);
  auto c = exact_dw_urn(tiny, 1e-9);
  CHECK(c.dw <= theorem_bound_urn(tiny).value + c.dw_budget);
  CHECK(c.tv <= c.dw + 1e-12);

  auto full = UrnSpec::make({2, 1}, 3);
  auto f = exact_dw_urn(full, 1e-9);
  CHECK(f.dw > 0.0);
  CHECK(theorem_bound_urn(full).vacuous);

  auto small = UrnSpec::with_background({1, 2, 27}, 3);
  auto s = exact_dw_urn(small, 1e-9);
  CHECK(s.dw <= theorem_bound_urn(small).value + s.dw_budget);
}

}  // TEST_SUITE
