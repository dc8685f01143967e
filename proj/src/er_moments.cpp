#include "mvpois/er_moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mvpois/errors.hpp"
#include "mvpois/stats.hpp"

namespace mvpois {

void GraphEnsembleSpec::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("graph ensemble: p must lie in (0, 1)");
  if (patterns.empty()) throw ParameterError("graph ensemble: at least one pattern is required");
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (patterns[i].vertex_count() > n) {
      throw ParameterError("graph ensemble: pattern " + patterns[i].name() + " has more vertices than n = " +
                           std::to_string(n));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (isomorphic(patterns[i], patterns[j])) {
        throw ParameterError("graph ensemble: patterns " + patterns[j].name() + " and " + patterns[i].name() +
                             " are isomorphic");
      }
    }
  }
}

double edge_probability(double c, double alpha, std::size_t n) {
  if (!(c > 0.0) || !(alpha > 0.0)) throw ParameterError("edge_probability: c and alpha must be positive");
  return c * std::pow(static_cast<double>(n), -1.0 / alpha);
}

double copy_count(const PatternGraph& h, std::size_t n) {
  double perms = 1.0;
  for (std::size_t i = 2; i <= h.vertex_count(); ++i) perms *= static_cast<double>(i);
  return binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(h.vertex_count())) * perms /
         static_cast<double>(automorphism_count(h));
}

double expected_count(const PatternGraph& h, std::size_t n, double p) {
  return copy_count(h, n) * std::pow(p, static_cast<double>(h.edge_count()));
}

double exact_cov(const PatternGraph& hi, const PatternGraph& hj, std::size_t n, double p, const OverlapTable& table) {
  if (table.edges_i != hi.edge_count() || table.edges_j != hj.edge_count() ||
      table.vertices_i != hi.vertex_count() || table.vertices_j != hj.vertex_count()) {
    throw ParameterError("exact_cov: overlap table does not belong to this pattern pair");
  }
  const double log_p = std::log(p);
  const double e = static_cast<double>(hi.edge_count() + hj.edge_count());
  CompensatedSum total;
  for (const auto& [key, count] : table.entries) {
    const auto [k, s] = key;
    if (k == 0 || s > n || count == 0) continue;
    const double kk = static_cast<double>(k);
    total.add(binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(s)) * static_cast<double>(count) *
              std::exp((e - kk) * log_p) * -std::expm1(kk * log_p));
  }
  return total.value();
}

GraphMomentEngine::GraphMomentEngine(std::vector<PatternGraph> patterns) : patterns_(std::move(patterns)) {
  tables_.resize(patterns_.size());
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) tables_[i].push_back(overlap_table(patterns_[i], patterns_[j]));
  }
}

const OverlapTable& GraphMomentEngine::table(std::size_t i, std::size_t j) const {
  if (j > i) throw ParameterError("GraphMomentEngine::table: expects j <= i");
  return tables_.at(i).at(j);
}

MomentSet GraphMomentEngine::moments(std::size_t n, double p) const {
  GraphEnsembleSpec{n, p, patterns_}.validate();
  const std::size_t d = patterns_.size();
  MomentSet m;
  m.covariance.assign(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    m.lambda.push_back(expected_count(patterns_[i], n, p));
    for (std::size_t j = 0; j <= i; ++j) {
      const double c = exact_cov(patterns_[i], patterns_[j], n, p, tables_[i][j]);
      m.covariance[i][j] = m.covariance[j][i] = c;
    }
    m.variance.push_back(m.covariance[i][i]);
  }
  return m;
}

MomentSet moments(const GraphEnsembleSpec& spec) { return GraphMomentEngine(spec.patterns).moments(spec.n, spec.p); }

MomentBound bound_t4(const GraphEnsembleSpec& spec, const MomentSet& m) {
  if (m.dimension() != spec.patterns.size()) throw ParameterError("bound_t4: moments do not match the patterns");
  std::vector<double> sum_p_squared;
  for (std::size_t i = 0; i < spec.patterns.size(); ++i) {
    if (!(m.lambda[i] > 0.0)) throw ParameterError("bound_t4: lambda must be positive");
    sum_p_squared.push_back(m.lambda[i] * std::pow(spec.p, static_cast<double>(spec.patterns[i].edge_count())));
  }
  return bound_i1(m.lambda, m.variance, m.covariance, sum_p_squared);
}

C4aBound variance_upper_c4a(const PatternGraph& h, std::size_t n, double p) {
  const std::size_t v = h.vertex_count();
  if (v > n) throw ParameterError("variance_upper_c4a: pattern larger than the host graph");
  if (2 * v - 2 > kMaxHostVertices) {
    throw ResourceError("variance_upper_c4a: anchored enumeration needs 2v - 2 <= " +
                        std::to_string(kMaxHostVertices) + " vertices");
  }
  const auto copies = labeled_copies(h);
  const EdgeMask anchor = to_mask(copies.front());

  std::map<std::size_t, double> counts;
  for (std::size_t t = 2; t <= v; ++t) {
    const double fresh_ways = binomial(static_cast<std::int64_t>(n - v), static_cast<std::int64_t>(v - t));
    if (fresh_ways == 0.0) continue;
    // Every t-subset of the anchor's vertices, followed by v - t fresh vertices.
    std::vector<char> pick(v, 0);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(t), 1);
    do {
      std::vector<int> vertices;
      for (std::size_t x = 0; x < v; ++x) {
        if (pick[x]) vertices.push_back(static_cast<int>(x));
      }
      for (std::size_t f = 0; f < v - t; ++f) vertices.push_back(static_cast<int>(v + f));
      for (const auto& c : copies) {
        const EdgeMask beta = to_mask(relabel(c, vertices));
        const std::size_t k = (beta & anchor).count();
        if (k == 0 || beta == anchor) continue;
        counts[k] += fresh_ways;
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }

  C4aBound out;
  out.lambda = expected_count(h, n, p);
  out.copies_by_shared_edges = counts;
  const double e = static_cast<double>(h.edge_count());
  CompensatedSum inner;
  inner.add(std::pow(p, e));
  for (const auto& [k, c] : counts) inner.add(c * std::pow(p, e - static_cast<double>(k)));
  out.value = out.lambda * inner.value();
  return out;
}

std::map<std::size_t, double> anchored_counts_from_table(const PatternGraph& h, std::size_t n) {
  const auto table = overlap_table(h, h);
  const double copies = copy_count(h, n);
  std::map<std::size_t, double> out;
  for (const auto& [key, count] : table.entries) {
    const auto [k, s] = key;
    if (k == 0 || s > n) continue;
    auto it = table.identical.find(key);
    const std::uint64_t same = it == table.identical.end() ? 0 : it->second;
    if (count == same) continue;
    out[k] += static_cast<double>(count - same) *
              binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(s)) / copies;
  }
  return out;
}

T5Bracket corollary_t5_bracket(const GraphEnsembleSpec& spec, const MomentSet& m) {
  spec.validate();
  if (m.dimension() != spec.patterns.size()) {
    throw ParameterError("corollary_t5_bracket: moments do not match the patterns");
  }
  const double n = static_cast<double>(spec.n);
  const std::size_t d = spec.patterns.size();
  T5Bracket out;
  CompensatedSum total;
  for (std::size_t i = 0; i < d; ++i) {
    const auto& h = spec.patterns[i];
    const double gamma = gamma_eta(h, h.density()).gamma_subgraph;
    out.gamma.push_back(gamma);
    const double pe = std::pow(spec.p, static_cast<double>(h.edge_count()));
    const double term =
        std::min(1.0, m.lambda[i]) * (pe + std::pow(n, static_cast<double>(h.vertex_count()) - gamma) * pe);
    out.diag_terms.push_back(term);
    total.add(term);
  }
  CompensatedSum cross;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (spec.n < spec.patterns[i].vertex_count() + spec.patterns[j].vertex_count()) out.out_of_model = true;
      if (j == i) continue;
      const auto stats = shared_edge_stats(spec.patterns[i], spec.patterns[j]);
      for (auto k : stats.feasible) {
        cross.add(m.lambda[j] * std::pow(spec.p, -static_cast<double>(k)) *
                  std::pow(n, -static_cast<double>(stats.ell.at(k))));
      }
    }
  }
  out.cross_part = cross.value();
  total.add(out.cross_part);
  out.value = total.value();
  return out;
}

LrExponents lr_exponents(const SharedEdgeStats& stats, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("lr_exponents: alpha must be positive");
  LrExponents out;
  out.dominant = -std::numeric_limits<double>::infinity();
  for (auto k : stats.feasible) {
    const double x = static_cast<double>(k) / alpha - static_cast<double>(stats.ell.at(k));
    out.by_k[k] = x;
    out.dominant = std::max(out.dominant, x);
  }
  return out;
}

LrExponents lr_exponents(const PatternGraph& hi, const PatternGraph& hj, double alpha) {
  return lr_exponents(shared_edge_stats(hi, hj), alpha);
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::kSubcritical:
      return "subcritical";
    case Regime::kCritical:
      return "critical";
    case Regime::kSupercritical:
      return "supercritical";
  }
  return "unknown";
}

Regime classify(const PatternGraph& h, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("classify: alpha must be positive");
  const double d = h.density();
  if (std::abs(d - alpha) <= 1e-9 * std::max(1.0, alpha)) return Regime::kCritical;
  return d < alpha ? Regime::kSubcritical : Regime::kSupercritical;
}

T5bReport t5b_report(const std::vector<PatternGraph>& patterns, double c, double alpha, std::size_t n) {
  T5bReport out;
  out.c = c;
  out.alpha = alpha;
  out.n = n;
  out.p = edge_probability(c, alpha, n);
  if (!(out.p < 1.0)) throw ParameterError("t5b_report: c n^{-1/alpha} must be below 1");
  for (const auto& h : patterns) {
    PatternRegime r;
    r.name = h.name();
    r.density = h.density();
    r.regime = classify(h, alpha);
    r.strictly_balanced = density_and_balance(h).strictly_balanced;
    if (h.vertex_count() <= n) r.lambda = expected_count(h, n, out.p);
    if (!r.strictly_balanced) {
      out.warnings.push_back(h.name() + " is not strictly balanced; its threshold behaviour is not covered "
                             "by this classification");
    }
    const GammaEta ge = gamma_eta(h, alpha);
    switch (r.regime) {
      case Regime::kSubcritical:
        if (ge.gamma_overlap_full) {
          r.gamma = *ge.gamma_overlap_full;
        } else {
          out.warnings.push_back(h.name() + ": overlap enumeration exceeds the vertex cap, gamma not computed");
        }
        break;
      case Regime::kCritical:
        r.gamma = ge.gamma_subgraph;
        r.lambda_limit = std::pow(c, alpha * static_cast<double>(h.vertex_count())) /
                         static_cast<double>(automorphism_count(h));
        out.critical_rate = out.critical_rate ? std::min(*out.critical_rate, ge.gamma_subgraph) : ge.gamma_subgraph;
        break;
      case Regime::kSupercritical:
        r.eta = ge.eta;
        break;
    }
    out.patterns.push_back(std::move(r));
  }
  return out;
}

}  // namespace mvpois
