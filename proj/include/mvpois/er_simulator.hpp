#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mvpois/er_moments.hpp"
#include "mvpois/graph_patterns.hpp"
#include "mvpois/lattice_dist.hpp"
#include "mvpois/rng.hpp"
#include "mvpois/size_biased.hpp"
#include "mvpois/stats.hpp"

namespace mvpois {

// Simple undirected graph on vertices 0..n-1.
class SampledGraph {
 public:
  explicit SampledGraph(std::size_t n);

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_; }
  bool has_edge(int a, int b) const;
  // Returns false when the edge was already present.
  bool add_edge(int a, int b);
  void remove_edge(int a, int b);
  const std::vector<int>& neighbors(int a) const { return adjacency_[static_cast<std::size_t>(a)]; }
  EdgeList edges() const;

  // "n m" followed by one "a b" line per edge (1-indexed).
  std::string to_edge_list_text() const;

 private:
  std::size_t n_;
  std::size_t edges_ = 0;
  std::size_t words_per_row_;
  std::vector<std::uint64_t> matrix_;
  std::vector<std::vector<int>> adjacency_;
};

// Each pair independently with probability p, by geometric skipping.
SampledGraph sample_gnp(std::size_t n, double p, Rng& rng);
SampledGraph sample_gnp(std::size_t n, double p, std::uint64_t seed);

// Counts copies of fixed patterns by backtracking over injective
// edge-preserving vertex maps, divided by the automorphism count.
class SubgraphCounter {
 public:
  explicit SubgraphCounter(std::vector<PatternGraph> patterns);

  std::size_t dimension() const { return plans_.size(); }
  const PatternGraph& pattern(std::size_t i) const { return plans_[i].pattern; }
  const std::vector<EdgeList>& labeled(std::size_t i) const { return plans_[i].labeled; }

  std::int64_t count(const SampledGraph& g, std::size_t i) const;
  std::vector<std::int64_t> count(const SampledGraph& g) const;

 private:
  struct Plan {
    PatternGraph pattern;
    std::uint64_t automorphisms = 1;
    std::vector<int> order;                   // pattern vertices in matching order
    std::vector<std::vector<int>> back_adj;   // earlier neighbours, by position in order
    std::vector<int> degree;                  // pattern degree, by position in order
    std::vector<EdgeList> labeled;            // distinct copies on {0..v-1}
  };
  std::uint64_t injections(const SampledGraph& g, const Plan& plan) const;

  std::vector<Plan> plans_;
};

std::vector<std::int64_t> count_copies_joint(const SampledGraph& g, const std::vector<PatternGraph>& patterns);

// One row of the graph coupling: a uniform copy alpha of pattern i is forced
// into G and the first i + 1 counts are taken on G u alpha.
struct GraphCouplingRow {
  std::vector<std::int64_t> w;        // counts on G
  std::vector<std::int64_t> w_tilde;  // i + 1 coordinates
  EdgeList forced_copy;
  std::size_t added_edges = 0;
};

GraphCouplingRow graph_coupling(const SampledGraph& g, const SubgraphCounter& counter, std::size_t i, Rng& rng);
GraphCouplingRow graph_coupling(const SampledGraph& g, const std::vector<PatternGraph>& patterns, std::size_t i,
                                std::uint64_t seed);

// The same coupling with Gamma_i materialized, for exhaustive checks on tiny
// hosts. The state holds one byte per vertex pair of K_n.
class GraphIndicatorModel final : public IndicatorSumModel {
 public:
  GraphIndicatorModel(std::vector<PatternGraph> patterns, std::size_t n, double p);

  std::size_t dimension() const override { return copies_.size(); }
  std::size_t block_size(std::size_t i) const override { return copies_[i].size(); }
  double marginal(std::size_t i, std::size_t j) const override;
  bool indicator(const ModelState& state, std::size_t i, std::size_t j) const override;
  ModelState sample(Rng& rng) const override;
  ModelState couple(const ModelState& state, std::size_t i, std::size_t l, Rng& rng) const override;

  bool supports_exhaustive() const override { return true; }
  void enumerate(const StateVisitor& visit) const override;
  void coupled_law(const ModelState& state, std::size_t i, std::size_t l, const StateVisitor& visit) const override;
  bool exchangeable(std::size_t) const override { return true; }

  std::size_t pair_count() const { return pairs_; }

 private:
  std::vector<PatternGraph> patterns_;
  std::size_t n_;
  double p_;
  std::size_t pairs_;
  // copies_[i][j]: pair indices of the j-th copy of pattern i
  std::vector<std::vector<std::vector<std::size_t>>> copies_;
};

// Coupling terms of the bound for G(n, p) by Monte Carlo; trial t draws its
// graph and all forced copies from substream(seed, t).
BoundReport mc_coupling_terms(const GraphEnsembleSpec& spec, std::size_t trials, std::uint64_t seed);

struct DistanceEstimate {
  std::size_t trials = 0;
  std::vector<double> lambda;
  double dw = 0.0;
  double dw_budget = 0.0;
  double dw_stderr = 0.0;  // bootstrap
  double tv = 0.0;
  double tv_budget = 0.0;
  double tv_stderr = 0.0;
  std::vector<double> dw_replicates;
  std::vector<double> sample_mean;
  std::vector<double> sample_mean_stderr;
};

struct DistanceOptions {
  double eps_trunc = 1e-6;
  std::size_t bootstrap = 200;
  TransportOptions transport;
};

// Empirical law of W over `trials` sampled graphs against the truncated
// Poisson product with the exact means.
DistanceEstimate mc_empirical_distance(const GraphEnsembleSpec& spec, std::size_t trials, std::uint64_t seed,
                                       const DistanceOptions& options = {});

// Distance estimate for an arbitrary sample of count vectors.
DistanceEstimate empirical_distance(const std::vector<LatticePoint>& samples, std::span<const double> lambda,
                                    std::uint64_t seed, const DistanceOptions& options = {});

struct RateSweepRow {
  std::size_t n = 0;
  double p = 0.0;
  std::size_t trials = 0;
  DistanceEstimate distance;
  MomentSet moments;
  double bound_t4 = 0.0;
  double bracket = 0.0;
  bool out_of_model = false;
};

struct RateSweepResult {
  std::vector<RateSweepRow> rows;
  bool fitted = false;
  LinearFit dw_fit;
  double dw_slope_bootstrap_se = 0.0;
  LinearFit bracket_fit;
  LinearFit bound_fit;
  std::vector<std::string> warnings;
};

RateSweepResult rate_sweep(const std::vector<PatternGraph>& patterns, double c, double alpha,
                           std::vector<std::size_t> n_list, std::size_t trials, std::uint64_t seed,
                           const DistanceOptions& options = {});

// Relative deviation tail P(|W_i / lambda_i - 1| > eps) by Monte Carlo, next
// to the Chebyshev estimate Var / (eps lambda)^2.
struct TailEstimate {
  std::size_t trials = 0;
  double lambda = 0.0;
  double frequency = 0.0;
  double frequency_stderr = 0.0;
  double chebyshev = 0.0;
  double positive_frequency = 0.0;  // fraction of samples with W_i > 0
  double mean = 0.0;
  double mean_stderr = 0.0;
};

TailEstimate relative_tail(const GraphEnsembleSpec& spec, std::size_t i, double eps, std::size_t trials,
                           std::uint64_t seed);

}  // namespace mvpois
