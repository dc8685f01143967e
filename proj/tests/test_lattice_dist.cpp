#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mvpois/errors.hpp"
#include "mvpois/lattice_dist.hpp"
#include "mvpois/moments.hpp"
#include "support/oracles.hpp"

using namespace mvpois;

namespace {

LatticeDistribution bernoulli_half() { return LatticeDistribution(1, {{{0}, 0.5}, {{1}, 0.5}}); }

LatticeDistribution random_law(std::mt19937_64& rng, std::size_t dim, int span, int atoms) {
  std::uniform_int_distribution<int> coord(0, span);
  std::uniform_real_distribution<double> w(0.01, 1.0);
  std::map<LatticePoint, double> m;
  for (int a = 0; a < atoms; ++a) {
    LatticePoint x(dim);
    for (auto& c : x) c = coord(rng);
    m[x] += w(rng);
  }
  double total = 0.0;
  for (auto& [x, v] : m) total += v;
  std::vector<LatticeDistribution::Atom> out;
  double acc = 0.0;
  for (auto it = m.begin(); it != m.end(); ++it) {
    double v = it->second / total;
    if (std::next(it) == m.end()) v = 1.0 - acc;
    acc += v;
    out.push_back({it->first, v});
  }
  return LatticeDistribution(dim, out);
}

}  // namespace

TEST_SUITE("lattice_dist") {

TEST_CASE("construction validates atoms") {
  CHECK_THROWS_AS(LatticeDistribution(1, {{{0}, 0.4}}), ParameterError);
  CHECK_THROWS_AS(LatticeDistribution(2, {{{0}, 1.0}}), ParameterError);
  CHECK_THROWS_AS(LatticeDistribution(1, {{{0}, 0.5}, {{0}, 0.5}}), ParameterError);
  CHECK_THROWS_AS(LatticeDistribution(1, {{{-1}, 1.0}}), ParameterError);
  auto law = LatticeDistribution(2, {{{1, 0}, 0.25}, {{0, 3}, 0.75}, {{2, 2}, 0.0}});
  REQUIRE(law.size() == 2);
  CHECK(law.atoms()[0].point == LatticePoint{0, 3});
  CHECK(law.mass_at({1, 0}) == doctest::Approx(0.25));
  CHECK(law.mass_at({2, 2}) == 0.0);
  CHECK(law.mean(1) == doctest::Approx(2.25));
  auto lead = law.leading_marginal(1);
  CHECK(lead.mass_at({0}) == doctest::Approx(0.75));
}

TEST_CASE("json round trip") {
  auto law = LatticeDistribution(2, {{{1, 0}, 0.25}, {{0, 3}, 0.75}});
  auto j = to_json(law);
  CHECK(j["d"] == 2);
  CHECK(lattice_distribution_from_json(j) == law);
}

TEST_CASE("truncated Poisson product") {
  SUBCASE("lambda 1, eps 0.7") {
    std::vector<double> lam{1.0};
    auto t = poisson_product_truncated(lam, 0.7);
    CHECK(t.caps == LatticePoint{0});
    CHECK(t.tail_mass == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  }
  SUBCASE("lambda 1, eps 1e-12") {
    std::vector<double> lam{1.0};
    auto t = poisson_product_truncated(lam, 1e-12);
    CHECK(t.body.total_mass() >= 1.0 - 1e-12);
    CHECK(std::abs(t.body.total_mass() + t.tail_mass - 1.0) < 1e-12);
  }
  SUBCASE("caps match a cdf scan") {
    std::vector<double> lam{0.5, 2.0};
    auto t = poisson_product_truncated(lam, 1e-9);
    CHECK(t.caps[0] == oracle::poisson_quantile(0.5L, 0.5e-9L));
    CHECK(t.caps[1] == oracle::poisson_quantile(2.0L, 0.5e-9L));
    CHECK(t.tail_mass <= 1e-9);
  }
  SUBCASE("budget formula") {
    std::vector<double> lam{0.7, 1.3};
    auto t = poisson_product_truncated(lam, 1e-4);
    long double excess = 0.0L;
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::int64_t k = t.caps[i] + 1; k < 200; ++k) excess += (k - t.caps[i]) * oracle::poisson_pmf(lam[i], k);
    }
    const double floor = static_cast<double>(excess) + static_cast<double>(t.caps[0] + t.caps[1]) * t.tail_mass;
    CHECK(t.dw_error_budget >= floor * (1 - 1e-9));
  }
  SUBCASE("monotone in eps") {
    std::vector<double> lam{0.3, 4.0, 1.0};
    auto prev = poisson_product_truncated(lam, 0.1);
    for (double eps : {1e-2, 1e-4, 1e-8, 1e-12}) {
      auto cur = poisson_product_truncated(lam, eps);
      for (std::size_t i = 0; i < lam.size(); ++i) CHECK(cur.caps[i] >= prev.caps[i]);
      CHECK(cur.body.total_mass() >= prev.body.total_mass());
      prev = cur;
    }
  }
  SUBCASE("collapsed is a probability law") {
    std::vector<double> lam{0.5, 0.5};
    auto t = poisson_product_truncated(lam, 1e-3);
    auto c = t.collapsed();
    CHECK(c.is_probability());
    CHECK(c.mass_at(t.caps) >= t.tail_mass);
  }
  SUBCASE("errors") {
    std::vector<double> bad{0.0};
    CHECK_THROWS_AS(poisson_product_truncated(bad, 0.1), ParameterError);
    std::vector<double> ok{1.0};
    CHECK_THROWS_AS(poisson_product_truncated(ok, 0.0), ParameterError);
    CHECK_THROWS_AS(poisson_product_truncated(ok, 1.0), ParameterError);
  }
}

TEST_CASE("Poisson tails") {
  for (double lam : {0.2, 1.0, 7.5}) {
    for (std::int64_t t : {0, 1, 3, 12}) {
      long double surv = 0.0L;
      long double ex = 0.0L;
      for (std::int64_t k = t + 1; k < 400; ++k) {
        surv += oracle::poisson_pmf(lam, k);
        ex += (k - t) * oracle::poisson_pmf(lam, k);
      }
      CHECK(poisson_survival(lam, t) == doctest::Approx(static_cast<double>(surv)).epsilon(1e-9));
      CHECK(poisson_excess_mean(lam, t) == doctest::Approx(static_cast<double>(ex)).epsilon(1e-9));
    }
  }
}

TEST_CASE("total variation") {
  auto b = bernoulli_half();
  CHECK(tv_distance(b, b) == 0.0);
  CHECK(tv_distance(LatticeDistribution::point_mass({0}), LatticeDistribution::point_mass({1})) == 1.0);
  CHECK(tv_distance(b, LatticeDistribution::point_mass({0})) == doctest::Approx(0.5));
  CHECK_THROWS_AS(tv_distance(b, LatticeDistribution::point_mass({0, 0})), ParameterError);
}

TEST_CASE("Wasserstein examples") {
  CHECK(wasserstein_distance(LatticeDistribution::point_mass({0, 0}), LatticeDistribution::point_mass({1, 1})) ==
        doctest::Approx(2.0));
  auto b = bernoulli_half();
  CHECK(wasserstein_distance(b, b) == doctest::Approx(0.0));
  CHECK(wasserstein_distance(b, LatticeDistribution::point_mass({0})) == doctest::Approx(0.5));
  CHECK(wasserstein_1d_oracle(b, LatticeDistribution::point_mass({0})) == doctest::Approx(0.5));
  CHECK(wasserstein_1d_oracle(LatticeDistribution::point_mass({0}), LatticeDistribution::point_mass({3})) ==
        doctest::Approx(3.0));
  CHECK_THROWS_AS(wasserstein_1d_oracle(LatticeDistribution::point_mass({0, 0}), LatticeDistribution::point_mass({0, 1})),
                  ParameterError);
  CHECK_THROWS_AS(wasserstein_distance(b, LatticeDistribution::point_mass({0, 0})), ParameterError);
}

TEST_CASE("Poisson(1) truncated at 20 against a point mass") {
  std::vector<LatticeDistribution::Atom> atoms;
  double total = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double m = static_cast<double>(oracle::poisson_pmf(1.0L, k));
    atoms.push_back({{k}, m});
    total += m;
  }
  for (auto& a : atoms) a.mass /= total;
  LatticeDistribution pois(1, atoms);
  auto delta = LatticeDistribution::point_mass({0});
  CHECK(std::abs(wasserstein_distance(pois, delta) - wasserstein_1d_oracle(pois, delta)) < 1e-10);
}

TEST_CASE("transport cap") {
  std::mt19937_64 rng(5);
  auto a = random_law(rng, 2, 40, 300);
  auto b = random_law(rng, 2, 40, 300);
  TransportOptions tight;
  tight.max_pairs = 1000;
  CHECK_THROWS_AS(wasserstein_distance(a, b, tight), ResourceError);
}

TEST_CASE("metric properties on random laws") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    auto a = random_law(rng, 2, 4, 6);
    auto b = random_law(rng, 2, 4, 6);
    auto c = random_law(rng, 2, 4, 6);
    const double ab = wasserstein_distance(a, b);
    const double ba = wasserstein_distance(b, a);
    const double bc = wasserstein_distance(b, c);
    const double ac = wasserstein_distance(a, c);
    CHECK(std::abs(ab - ba) < 1e-10);
    CHECK(ac <= ab + bc + 1e-10);
    CHECK(tv_distance(a, b) <= ab + 1e-12);
    CHECK(wasserstein_distance(a, a) < 1e-12);
    auto plan = optimal_transport(a, b);
    std::vector<double> row(a.size(), 0.0);
    std::vector<double> col(b.size(), 0.0);
    double cost = 0.0;
    for (const auto& f : plan.flows) {
      CHECK(f.mass >= 0.0);
      row[f.from] += f.mass;
      col[f.to] += f.mass;
      cost += f.mass * static_cast<double>(l1_distance(a.atoms()[f.from].point, b.atoms()[f.to].point));
    }
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(row[i] - a.atoms()[i].mass) < 1e-10);
    for (std::size_t j = 0; j < b.size(); ++j) CHECK(std::abs(col[j] - b.atoms()[j].mass) < 1e-10);
    CHECK(std::abs(cost - plan.cost) < 1e-10);
  }
}

TEST_CASE("empirical distribution") {
  std::vector<LatticePoint> s{{0, 0}, {0, 0}, {1, 2}};
  auto e = empirical_distribution(s);
  CHECK(e.mass_at({0, 0}) == doctest::Approx(2.0 / 3.0));
  CHECK(e.mass_at({1, 2}) == doctest::Approx(1.0 / 3.0));
  std::vector<LatticePoint> one{{5}};
  CHECK(empirical_distribution(one) == LatticeDistribution::point_mass({5}));
  CHECK_THROWS_AS(empirical_distribution(std::vector<LatticePoint>{}), ParameterError);

  std::mt19937_64 rng(3);
  std::poisson_distribution<int> pois(1.0);
  std::vector<LatticePoint> draws;
  for (int t = 0; t < 100000; ++t) draws.push_back({pois(rng)});
  auto emp = empirical_distribution(draws);
  std::vector<LatticeDistribution::Atom> exact;
  double total = 0.0;
  for (int k = 0; k <= 30; ++k) {
    exact.push_back({{k}, static_cast<double>(oracle::poisson_pmf(1.0L, k))});
    total += exact.back().mass;
  }
  exact.back().mass += 1.0 - total;
  CHECK(tv_distance(emp, LatticeDistribution(1, exact)) < 0.02);
}

TEST_CASE("moments of a law") {
  auto law = LatticeDistribution(2, {{{0, 1}, 0.5}, {{1, 0}, 0.5}});
  auto m = moments_of(law);
  CHECK(m.lambda[0] == doctest::Approx(0.5));
  CHECK(m.variance[1] == doctest::Approx(0.25));
  CHECK(m.covariance[0][1] == doctest::Approx(-0.25));
  CHECK(m.covariance[1][0] == doctest::Approx(-0.25));
}

TEST_CASE("comparison against a Poisson product") {
  std::vector<double> lam{0.5};
  auto t = poisson_product_truncated(lam, 1e-10);
  auto delta = LatticeDistribution::point_mass({0});
  auto c = compare_to_poisson(delta, t);
  CHECK(c.dw == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(c.tv == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-8));
  CHECK(c.dw_budget >= 0.0);
}

}  // TEST_SUITE
