#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mvpois/lattice_dist.hpp"
#include "mvpois/rng.hpp"

namespace mvpois {

// Model-defined configuration from which all indicators are read (indicator
// bits for toy models, edge bits for graphs, ball membership for urns).
using ModelState = std::vector<std::uint8_t>;

using StateVisitor = std::function<void(const ModelState& state, double probability)>;

// W = (W_1, ..., W_d) with W_i the sum of the indicators X^i_1..X^i_{n_i}.
//
// The model owns both laws the coupling needs: the joint law of all indicators
// and, through `couple`, a configuration distributed as the original given
// X^i_l = 1. The core never conditions a pmf itself.
class IndicatorSumModel {
 public:
  virtual ~IndicatorSumModel() = default;

  virtual std::size_t dimension() const = 0;
  virtual std::size_t block_size(std::size_t i) const = 0;
  virtual double marginal(std::size_t i, std::size_t j) const = 0;
  virtual bool indicator(const ModelState& state, std::size_t i, std::size_t j) const = 0;
  virtual std::vector<std::int64_t> counts(const ModelState& state) const;

  virtual ModelState sample(Rng& rng) const = 0;
  // A configuration whose law is that of the original given X^i_l = 1, built
  // on the same probability space as `state`.
  virtual ModelState couple(const ModelState& state, std::size_t i, std::size_t l, Rng& rng) const = 0;

  // Exhaustive mode: the full joint law, and the exact law of `couple` from a
  // fixed configuration.
  virtual bool supports_exhaustive() const { return false; }
  virtual void enumerate(const StateVisitor& visit) const;
  virtual void coupled_law(const ModelState& state, std::size_t i, std::size_t l, const StateVisitor& visit) const;

  // True when the indicators of block i are exchangeable.
  virtual bool exchangeable(std::size_t /*i*/) const { return false; }

  double lambda(std::size_t i) const;
  std::vector<double> lambdas() const;
  std::size_t indicator_count() const;
};

struct CouplingRun {
  std::vector<std::int64_t> w;
  // Row i (0-based) holds the i + 1 coordinates of the coupled vector.
  std::vector<std::vector<std::int64_t>> w_tilde;
  std::vector<std::size_t> chosen;
};

enum class BoundMode { kExact, kMonteCarlo };

std::string to_string(BoundMode mode);

struct BoundReport {
  BoundMode mode = BoundMode::kExact;
  std::size_t trials = 0;
  std::vector<double> lambda;
  // E|W~^i_i - 1 - W_i|
  std::vector<double> diag_terms;
  // Row i: E|W~^i_j - W_j| for j < i (row 0 is empty).
  std::vector<std::vector<double>> cross_terms;
  std::vector<double> diag_stderr;
  std::vector<std::vector<double>> cross_stderr;
  // Signed counterparts E(W~^i_i - W_i) and E(W~^i_j - W_j); lambda_i times
  // these are Var(W_i) and Cov(W_i, W_j) for any size-biased coupling.
  std::vector<double> diag_shift;
  std::vector<std::vector<double>> cross_shift;
  std::vector<double> diag_shift_stderr;
  std::vector<std::vector<double>> cross_shift_stderr;
  double total = 0.0;
};

nlohmann::json to_json(const BoundReport& report);

std::vector<double> index_distribution(const IndicatorSumModel& model, std::size_t i);

CouplingRun construct_coupling(const IndicatorSumModel& model, Rng& rng);
CouplingRun construct_coupling(const IndicatorSumModel& model, std::uint64_t seed);

struct ExhaustiveOptions {
  std::size_t max_indicators = 24;
};

// Largest |P(W~^i = k) - (k_i / lambda_i) P(W^i = k)| over all i and k.
double verify_size_biased_exact(const IndicatorSumModel& model, const ExhaustiveOptions& options = {});

// Coupling terms computed by exact summation over the joint law.
BoundReport exact_bound_terms(const IndicatorSumModel& model, const ExhaustiveOptions& options = {});

// Monte Carlo estimates over `trials` couplings; trial t uses substream seed ^ t.
BoundReport mc_bound_terms(const IndicatorSumModel& model, std::size_t trials, std::uint64_t seed);

double bound_univariate_tv(double lambda, double diag_term);

// sum_i min{1, l_i} diag_i + 2 sum_{i>=2} l_i sum_{j<i} cross_ij
double bound_t1(std::span<const double> diag_terms, const std::vector<std::vector<double>>& cross_terms,
                std::span<const double> lambda);
double bound_t1(const BoundReport& report);

enum class CouplingDirection { kIncreasing, kDecreasing };

struct MomentBound {
  double value = 0.0;
  double diagonal_part = 0.0;
  double cross_part = 0.0;
  std::vector<double> diagonal_terms;
  // Set when the value came out negative, which signals that the monotone
  // coupling hypothesis does not hold for the supplied moments.
  bool negative_warning = false;
  CouplingDirection certified = CouplingDirection::kIncreasing;
};

// `covariance` is a full symmetric d x d matrix (its diagonal is ignored);
// `sum_p_squared[i]` is sum_j p_{i,j}^2.
MomentBound bound_i1(std::span<const double> lambda, std::span<const double> variance,
                     const std::vector<std::vector<double>>& covariance, std::span<const double> sum_p_squared);
MomentBound bound_i1(std::span<const double> lambda, std::span<const double> variance,
                     const std::vector<std::vector<double>>& covariance,
                     const std::vector<std::vector<double>>& p_table);
MomentBound bound_dd(std::span<const double> lambda, std::span<const double> variance,
                     const std::vector<std::vector<double>>& covariance);

// Samples `runs` couplings and checks the monotonicity hypothesis indicator by
// indicator; throws InvariantError with a diagnostic on the first violation.
void spot_check_monotone(const IndicatorSumModel& model, CouplingDirection direction, std::size_t runs,
                         std::uint64_t seed);

// Exact first and second moments of W from the enumerated joint law.
struct ExactMoments {
  std::vector<double> mean;
  std::vector<std::vector<double>> covariance;
};
ExactMoments exact_moments(const IndicatorSumModel& model, const ExhaustiveOptions& options = {});

// Exact law of W from the enumerated joint law.
LatticeDistribution exact_law(const IndicatorSumModel& model, const ExhaustiveOptions& options = {});

}  // namespace mvpois
