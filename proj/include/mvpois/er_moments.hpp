#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mvpois/graph_patterns.hpp"
#include "mvpois/moments.hpp"
#include "mvpois/size_biased.hpp"

namespace mvpois {

// Joint subgraph counts W_i = number of copies of patterns[i] in G(n, p).
struct GraphEnsembleSpec {
  std::size_t n = 0;
  double p = 0.0;
  std::vector<PatternGraph> patterns;

  // Throws ParameterError unless 0 < p < 1, every v_i <= n and the patterns
  // are pairwise non-isomorphic.
  void validate() const;
};

// p = c n^{-1/alpha}.
double edge_probability(double c, double alpha, std::size_t n);

// C(n, v) (v!/a) p^e
double expected_count(const PatternGraph& h, std::size_t n, double p);
double copy_count(const PatternGraph& h, std::size_t n);

// sum_{k >= 1, s <= n} C(n, s) N_{k,s} p^{e_i + e_j - k} (1 - p^k). For an
// isomorphic pair the identical pairs are part of the table, which makes this
// the variance.
double exact_cov(const PatternGraph& hi, const PatternGraph& hj, std::size_t n, double p,
                 const OverlapTable& table);

// Overlap tables for all pattern pairs, computed once and reused across (n, p).
class GraphMomentEngine {
 public:
  explicit GraphMomentEngine(std::vector<PatternGraph> patterns);

  const std::vector<PatternGraph>& patterns() const { return patterns_; }
  const OverlapTable& table(std::size_t i, std::size_t j) const;
  MomentSet moments(std::size_t n, double p) const;

 private:
  std::vector<PatternGraph> patterns_;
  std::vector<std::vector<OverlapTable>> tables_;  // tables_[i][j] for j <= i
};

MomentSet moments(const GraphEnsembleSpec& spec);

// Moment bound for increasing couplings with sum_l p_{i,l}^2 = lambda_i p^{e_i}.
MomentBound bound_t4(const GraphEnsembleSpec& spec, const MomentSet& moments);

struct C4aBound {
  double value = 0.0;  // upper bound for Var - lambda + 2 lambda p^e
  double lambda = 0.0;
  // Number of copies beta != alpha sharing exactly k edges with a fixed copy alpha.
  std::map<std::size_t, double> copies_by_shared_edges;
};

// The anchor copy sits on vertices {0..v-1}; every copy meeting it in at
// least one edge is enumerated directly.
C4aBound variance_upper_c4a(const PatternGraph& h, std::size_t n, double p);

// Per-anchor counts of overlapping copies derived from the overlap table
// instead; used to cross-check the enumeration above.
std::map<std::size_t, double> anchored_counts_from_table(const PatternGraph& h, std::size_t n);

struct T5Bracket {
  double value = 0.0;
  std::vector<double> diag_terms;
  double cross_part = 0.0;
  std::vector<double> gamma;  // gamma_subgraph(H_i, d_{H_i})
  // True when n < v_i + v_j for some pair, where the large-n statement says nothing.
  bool out_of_model = false;
};

T5Bracket corollary_t5_bracket(const GraphEnsembleSpec& spec, const MomentSet& moments);

struct LrExponents {
  std::map<std::size_t, double> by_k;  // k -> k/alpha - l_k
  double dominant = 0.0;
};

LrExponents lr_exponents(const SharedEdgeStats& stats, double alpha);
LrExponents lr_exponents(const PatternGraph& hi, const PatternGraph& hj, double alpha);

enum class Regime { kSubcritical, kCritical, kSupercritical };

std::string to_string(Regime regime);

Regime classify(const PatternGraph& h, double alpha);

struct PatternRegime {
  std::string name;
  Regime regime = Regime::kCritical;
  double density = 0.0;
  bool strictly_balanced = true;
  double lambda = 0.0;  // at the requested n
  // subcritical: gamma over overlaps including the identical copy
  // critical:    gamma_subgraph at alpha
  // supercritical: unset (eta applies)
  std::optional<double> gamma;
  std::optional<double> eta;
  std::optional<double> lambda_limit;  // c^{alpha v} / a for critical patterns
};

struct T5bReport {
  double c = 0.0;
  double alpha = 0.0;
  std::size_t n = 0;
  double p = 0.0;
  std::vector<PatternRegime> patterns;
  std::optional<double> critical_rate;  // min gamma over critical patterns
  std::vector<std::string> warnings;
};

T5bReport t5b_report(const std::vector<PatternGraph>& patterns, double c, double alpha, std::size_t n);

}  // namespace mvpois
