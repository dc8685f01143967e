#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mvpois/lattice_dist.hpp"
#include "mvpois/moments.hpp"
#include "mvpois/rng.hpp"
#include "mvpois/size_biased.hpp"

namespace mvpois {

// m balls drawn without replacement from an urn of N = sum(colors) balls.
// W_i counts color i for the first `tracked` colors; any remaining colors are
// background and only enter through N.
struct UrnSpec {
  std::size_t N = 0;
  std::vector<std::size_t> colors;
  std::size_t m = 0;
  std::size_t tracked = 0;

  static UrnSpec make(std::vector<std::size_t> colors, std::size_t m);
  static UrnSpec with_background(std::vector<std::size_t> colors, std::size_t m);

  std::size_t dimension() const { return tracked; }
  void validate() const;
};

// Cap on the number of atoms of the exact pmf.
inline constexpr std::size_t kMaxUrnAtoms = 2'000'000;

LatticeDistribution exact_pmf(const UrnSpec& urn);

MomentSet moments(const UrnSpec& urn);

struct UrnBound {
  double value = 0.0;
  std::vector<double> diag_terms;  // min{1, m n_i / N} (1 - (N - n_i)(N - m) / (N (N - 1)))
  double cross_statement = 0.0;    // 2 (N - m) / (N (N - 1)) sum_{i>=2} sum_{j<i} n_j
  double cross_proof = 0.0;        // 2 (N - m) / (m (N - 1)) sum_{i>=2} sum_{j<i} lambda_j
  // Set when the bound cannot be informative (m = N, or a value of at least 1).
  bool vacuous = false;
};

UrnBound theorem_bound_urn(const UrnSpec& urn);

std::vector<std::int64_t> sample_urn(const UrnSpec& urn, Rng& rng);
std::vector<std::int64_t> sample_urn(const UrnSpec& urn, std::uint64_t seed);

// Ball-level model: state[b] = 1 when ball b is in the sample, balls ordered
// by color. The coupling for ball l of color i keeps the sample when it
// already holds l and otherwise adds l and removes a uniform ball among the m
// sampled ones.
class UrnIndicatorModel final : public IndicatorSumModel {
 public:
  explicit UrnIndicatorModel(UrnSpec urn);

  std::size_t dimension() const override { return urn_.tracked; }
  std::size_t block_size(std::size_t i) const override { return urn_.colors[i]; }
  double marginal(std::size_t, std::size_t) const override;
  bool indicator(const ModelState& state, std::size_t i, std::size_t j) const override;
  std::vector<std::int64_t> counts(const ModelState& state) const override;
  ModelState sample(Rng& rng) const override;
  ModelState couple(const ModelState& state, std::size_t i, std::size_t l, Rng& rng) const override;

  bool supports_exhaustive() const override { return true; }
  void enumerate(const StateVisitor& visit) const override;
  void coupled_law(const ModelState& state, std::size_t i, std::size_t l, const StateVisitor& visit) const override;
  bool exchangeable(std::size_t) const override { return true; }

  const UrnSpec& urn() const { return urn_; }

 private:
  std::size_t ball(std::size_t i, std::size_t j) const { return offsets_[i] + j; }

  UrnSpec urn_;
  std::vector<std::size_t> offsets_;
};

CouplingRun urn_coupling(const UrnSpec& urn, Rng& rng);
CouplingRun urn_coupling(const UrnSpec& urn, std::uint64_t seed);

// Exact d_W and d_TV between the urn law and the truncated Poisson product
// with lambda_i = m n_i / N.
PoissonComparison exact_dw_urn(const UrnSpec& urn, double eps_trunc, const TransportOptions& options = {});

}  // namespace mvpois
