#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

namespace mvpois {

using LatticePoint = std::vector<std::int64_t>;

inline constexpr double kMassTolerance = 1e-12;

std::int64_t l1_distance(const LatticePoint& a, const LatticePoint& b);

// Finitely supported measure on N_0^d. Atoms are kept sorted by point and
// are pairwise distinct; zero-mass atoms are dropped on construction.
//
// A LatticeDistribution is normally a probability law (total mass 1 within
// kMassTolerance). Sub-probability measures are allowed only through
// `sub_probability`, which is how truncated laws expose their body.
class LatticeDistribution {
 public:
  struct Atom {
    LatticePoint point;
    double mass = 0.0;

    friend bool operator==(const Atom&, const Atom&) = default;
  };

  LatticeDistribution(std::size_t dimension, std::vector<Atom> atoms);

  static LatticeDistribution sub_probability(std::size_t dimension, std::vector<Atom> atoms);
  static LatticeDistribution point_mass(LatticePoint point);

  std::size_t dimension() const { return dimension_; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool is_probability() const { return probability_; }

  double total_mass() const;
  double mass_at(const LatticePoint& point) const;
  double mean(std::size_t coordinate) const;

  // Law of the leading `k` coordinates.
  LatticeDistribution leading_marginal(std::size_t k) const;

  friend bool operator==(const LatticeDistribution&, const LatticeDistribution&) = default;

 private:
  LatticeDistribution(std::size_t dimension, std::vector<Atom> atoms, bool probability);

  std::size_t dimension_ = 0;
  std::vector<Atom> atoms_;
  bool probability_ = true;
};

// Independent Poisson product restricted to the box prod_i [0, caps_i].
struct TruncatedPoissonProduct {
  std::vector<double> lambda;
  LatticePoint caps;
  LatticeDistribution body;  // not renormalized
  double tail_mass = 0.0;
  // Certified bound on |d_W(X, P_lambda) - d_W(X, collapsed())| for any X.
  double dw_error_budget = 0.0;

  // Probability law obtained by moving the tail mass onto the corner `caps`.
  LatticeDistribution collapsed() const;
};

// Smallest caps with P(P_i > T_i) <= eps / d for every coordinate, so that the
// product law puts at most eps outside the box.
TruncatedPoissonProduct poisson_product_truncated(std::span<const double> lambda, double eps);

// Upper tail P(P > t) and E[(P - t)^+] of a Poisson(lambda) variable.
double poisson_survival(double lambda, std::int64_t t);
double poisson_excess_mean(double lambda, std::int64_t t);
double poisson_pmf(double lambda, std::int64_t k);

double tv_distance(const LatticeDistribution& p, const LatticeDistribution& q);

struct TransportOptions {
  std::size_t max_pairs = 4'000'000;
};

struct TransportFlow {
  std::size_t from = 0;  // atom index in the source law
  std::size_t to = 0;    // atom index in the target law
  double mass = 0.0;
};

struct TransportPlan {
  std::vector<TransportFlow> flows;
  double cost = 0.0;
};

// Exact optimal transport with ground cost |x - y|_1 between two probability
// laws on the lattice (successive shortest paths on the bipartite support graph).
TransportPlan optimal_transport(const LatticeDistribution& p, const LatticeDistribution& q,
                                const TransportOptions& options = {});

double wasserstein_distance(const LatticeDistribution& p, const LatticeDistribution& q,
                            const TransportOptions& options = {});

// d = 1 only: sum over integer thresholds of |F_P(t) - F_Q(t)|.
double wasserstein_1d_oracle(const LatticeDistribution& p, const LatticeDistribution& q);

LatticeDistribution empirical_distribution(std::span<const LatticePoint> samples);

// Distances from `law` to P_lambda, computed against the collapsed truncation,
// each with the error budget that separates it from the untruncated target.
struct PoissonComparison {
  double dw = 0.0;
  double dw_budget = 0.0;
  double tv = 0.0;
  double tv_budget = 0.0;
};

PoissonComparison compare_to_poisson(const LatticeDistribution& law, const TruncatedPoissonProduct& target,
                                     const TransportOptions& options = {});

nlohmann::json to_json(const LatticeDistribution& dist);
LatticeDistribution lattice_distribution_from_json(const nlohmann::json& j);

}  // namespace mvpois
