#include "mvpois/size_biased.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "mvpois/errors.hpp"
#include "mvpois/stats.hpp"

namespace mvpois {

std::vector<std::int64_t> IndicatorSumModel::counts(const ModelState& state) const {
  std::vector<std::int64_t> w(dimension(), 0);
  for (std::size_t i = 0; i < dimension(); ++i) {
    for (std::size_t j = 0; j < block_size(i); ++j) w[i] += indicator(state, i, j) ? 1 : 0;
  }
  return w;
}

void IndicatorSumModel::enumerate(const StateVisitor&) const {
  throw ModelError("model does not support exhaustive enumeration");
}

void IndicatorSumModel::coupled_law(const ModelState&, std::size_t, std::size_t, const StateVisitor&) const {
  throw ModelError("model does not expose the exact coupled law");
}

double IndicatorSumModel::lambda(std::size_t i) const {
  CompensatedSum s;
  for (std::size_t j = 0; j < block_size(i); ++j) s.add(marginal(i, j));
  return s.value();
}

std::vector<double> IndicatorSumModel::lambdas() const {
  std::vector<double> out(dimension());
  for (std::size_t i = 0; i < dimension(); ++i) out[i] = lambda(i);
  return out;
}

std::size_t IndicatorSumModel::indicator_count() const {
  std::size_t total = 0;
  for (std::size_t i = 0; i < dimension(); ++i) total += block_size(i);
  return total;
}

std::string to_string(BoundMode mode) { return mode == BoundMode::kExact ? "exact" : "mc"; }

std::vector<double> index_distribution(const IndicatorSumModel& model, std::size_t i) {
  if (i >= model.dimension()) throw ParameterError("index_distribution: block index out of range");
  const std::size_t n = model.block_size(i);
  if (model.exchangeable(i)) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  const double lambda = model.lambda(i);
  if (!(lambda > 0.0)) throw ModelError("index_distribution: block has zero mean");
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = model.marginal(i, j) / lambda;
  return out;
}

namespace {

std::size_t draw_index(const IndicatorSumModel& model, std::size_t i, Rng& rng) {
  const std::size_t n = model.block_size(i);
  if (model.exchangeable(i)) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  }
  const auto weights = index_distribution(model, i);
  return std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(rng);
}

std::vector<std::int64_t> coupled_row(const IndicatorSumModel& model, const ModelState& coupled, std::size_t i,
                                      std::size_t chosen) {
  auto w = model.counts(coupled);
  w.resize(i + 1);
  w[i] = w[i] - (model.indicator(coupled, i, chosen) ? 1 : 0) + 1;
  return w;
}

void check_exhaustive(const IndicatorSumModel& model, const ExhaustiveOptions& options) {
  if (!model.supports_exhaustive()) throw ModelError("model does not support exhaustive mode");
  if (model.indicator_count() > options.max_indicators) {
    throw ResourceError("exhaustive mode: " + std::to_string(model.indicator_count()) +
                        " indicators exceed the cap of " + std::to_string(options.max_indicators));
  }
}

// Visits every (base configuration, coupled row) pair of the exact coupling
// for block i with its probability.
template <typename Visit>
void for_each_coupled(const IndicatorSumModel& model, std::size_t i, Visit&& visit) {
  const auto weights = index_distribution(model, i);
  model.enumerate([&](const ModelState& state, double prob) {
    if (prob == 0.0) return;
    const auto w = model.counts(state);
    for (std::size_t l = 0; l < weights.size(); ++l) {
      if (weights[l] == 0.0) continue;
      model.coupled_law(state, i, l, [&](const ModelState& coupled, double q) {
        if (q == 0.0) return;
        visit(w, coupled_row(model, coupled, i, l), prob * weights[l] * q);
      });
    }
  });
}

}  // namespace

CouplingRun construct_coupling(const IndicatorSumModel& model, Rng& rng) {
  CouplingRun run;
  const ModelState state = model.sample(rng);
  run.w = model.counts(state);
  for (std::size_t i = 0; i < model.dimension(); ++i) {
    const std::size_t l = draw_index(model, i, rng);
    const ModelState coupled = model.couple(state, i, l, rng);
    run.chosen.push_back(l);
    run.w_tilde.push_back(coupled_row(model, coupled, i, l));
  }
  return run;
}

CouplingRun construct_coupling(const IndicatorSumModel& model, std::uint64_t seed) {
  Rng rng = substream(seed, 0);
  return construct_coupling(model, rng);
}

double verify_size_biased_exact(const IndicatorSumModel& model, const ExhaustiveOptions& options) {
  check_exhaustive(model, options);
  const std::size_t d = model.dimension();
  double worst = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double lambda = model.lambda(i);
    std::map<std::vector<std::int64_t>, CompensatedSum> base;
    model.enumerate([&](const ModelState& state, double prob) {
      auto w = model.counts(state);
      w.resize(i + 1);
      base[w].add(prob);
    });
    std::map<std::vector<std::int64_t>, CompensatedSum> coupled;
    for_each_coupled(model, i, [&](const std::vector<std::int64_t>&, const std::vector<std::int64_t>& row,
                                   double prob) { coupled[row].add(prob); });
    std::map<std::vector<std::int64_t>, double> keys;
    for (auto& [k, v] : base) keys[k] = 0.0;
    for (auto& [k, v] : coupled) keys[k] = 0.0;
    for (const auto& [k, unused] : keys) {
      const double lhs = coupled.count(k) ? coupled[k].value() : 0.0;
      const double rhs = base.count(k) ? static_cast<double>(k[i]) / lambda * base[k].value() : 0.0;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

namespace {

BoundReport empty_report(const IndicatorSumModel& model, BoundMode mode) {
  const std::size_t d = model.dimension();
  BoundReport r;
  r.mode = mode;
  r.lambda = model.lambdas();
  r.diag_terms.assign(d, 0.0);
  r.diag_stderr.assign(d, 0.0);
  r.diag_shift.assign(d, 0.0);
  r.diag_shift_stderr.assign(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    r.cross_terms.emplace_back(i, 0.0);
    r.cross_stderr.emplace_back(i, 0.0);
    r.cross_shift.emplace_back(i, 0.0);
    r.cross_shift_stderr.emplace_back(i, 0.0);
  }
  return r;
}

}  // namespace

BoundReport exact_bound_terms(const IndicatorSumModel& model, const ExhaustiveOptions& options) {
  check_exhaustive(model, options);
  BoundReport r = empty_report(model, BoundMode::kExact);
  for (std::size_t i = 0; i < model.dimension(); ++i) {
    CompensatedSum diag;
    CompensatedSum shift;
    std::vector<CompensatedSum> cross(i);
    std::vector<CompensatedSum> cross_shift(i);
    for_each_coupled(model, i, [&](const std::vector<std::int64_t>& w, const std::vector<std::int64_t>& row,
                                   double prob) {
      diag.add(prob * static_cast<double>(std::abs(row[i] - 1 - w[i])));
      shift.add(prob * static_cast<double>(row[i] - w[i]));
      for (std::size_t j = 0; j < i; ++j) {
        cross[j].add(prob * static_cast<double>(std::abs(row[j] - w[j])));
        cross_shift[j].add(prob * static_cast<double>(row[j] - w[j]));
      }
    });
    r.diag_terms[i] = diag.value();
    r.diag_shift[i] = shift.value();
    for (std::size_t j = 0; j < i; ++j) {
      r.cross_terms[i][j] = cross[j].value();
      r.cross_shift[i][j] = cross_shift[j].value();
    }
  }
  r.total = bound_t1(r);
  return r;
}

BoundReport mc_bound_terms(const IndicatorSumModel& model, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ParameterError("mc_bound_terms: trials must be at least 1");
  const std::size_t d = model.dimension();
  std::vector<RunningStats> diag(d);
  std::vector<RunningStats> shift(d);
  std::vector<std::vector<RunningStats>> cross(d);
  std::vector<std::vector<RunningStats>> cross_shift(d);
  for (std::size_t i = 0; i < d; ++i) {
    cross[i].resize(i);
    cross_shift[i].resize(i);
  }
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = substream(seed, t);
    const CouplingRun run = construct_coupling(model, rng);
    for (std::size_t i = 0; i < d; ++i) {
      const auto& row = run.w_tilde[i];
      diag[i].add(static_cast<double>(std::abs(row[i] - 1 - run.w[i])));
      shift[i].add(static_cast<double>(row[i] - run.w[i]));
      for (std::size_t j = 0; j < i; ++j) {
        cross[i][j].add(static_cast<double>(std::abs(row[j] - run.w[j])));
        cross_shift[i][j].add(static_cast<double>(row[j] - run.w[j]));
      }
    }
  }
  BoundReport r = empty_report(model, BoundMode::kMonteCarlo);
  r.trials = trials;
  for (std::size_t i = 0; i < d; ++i) {
    r.diag_terms[i] = diag[i].mean();
    r.diag_stderr[i] = diag[i].standard_error();
    r.diag_shift[i] = shift[i].mean();
    r.diag_shift_stderr[i] = shift[i].standard_error();
    for (std::size_t j = 0; j < i; ++j) {
      r.cross_terms[i][j] = cross[i][j].mean();
      r.cross_stderr[i][j] = cross[i][j].standard_error();
      r.cross_shift[i][j] = cross_shift[i][j].mean();
      r.cross_shift_stderr[i][j] = cross_shift[i][j].standard_error();
    }
  }
  r.total = bound_t1(r);
  return r;
}

double bound_univariate_tv(double lambda, double diag_term) {
  if (!(lambda > 0.0)) throw ParameterError("bound_univariate_tv: lambda must be positive");
  return std::min(1.0, lambda) * diag_term;
}

double bound_t1(std::span<const double> diag_terms, const std::vector<std::vector<double>>& cross_terms,
                std::span<const double> lambda) {
  if (diag_terms.size() != lambda.size()) throw ParameterError("bound_t1: term/lambda size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!(lambda[i] > 0.0)) throw ParameterError("bound_t1: lambda must be positive");
    total += std::min(1.0, lambda[i]) * diag_terms[i];
  }
  for (std::size_t i = 1; i < lambda.size() && i < cross_terms.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < i && j < cross_terms[i].size(); ++j) row += cross_terms[i][j];
    total += 2.0 * lambda[i] * row;
  }
  return total;
}

double bound_t1(const BoundReport& report) { return bound_t1(report.diag_terms, report.cross_terms, report.lambda); }

namespace {

void check_moment_inputs(std::span<const double> lambda, std::span<const double> variance,
                         const std::vector<std::vector<double>>& covariance, const char* who) {
  const std::size_t d = lambda.size();
  if (variance.size() != d || covariance.size() != d) {
    throw ParameterError(std::string(who) + ": moment sizes disagree");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!(lambda[i] > 0.0)) throw ParameterError(std::string(who) + ": lambda must be positive");
    if (covariance[i].size() != d) throw ParameterError(std::string(who) + ": covariance must be d x d");
  }
}

double cross_sum(std::span<const double> lambda, const std::vector<std::vector<double>>& covariance) {
  double total = 0.0;
  for (std::size_t i = 1; i < lambda.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < i; ++j) row += covariance[i][j];
    total += row / lambda[i];
  }
  return 2.0 * total;
}

}  // namespace

MomentBound bound_i1(std::span<const double> lambda, std::span<const double> variance,
                     const std::vector<std::vector<double>>& covariance, std::span<const double> sum_p_squared) {
  check_moment_inputs(lambda, variance, covariance, "bound_i1");
  if (sum_p_squared.size() != lambda.size()) throw ParameterError("bound_i1: p table size mismatch");
  MomentBound b;
  b.certified = CouplingDirection::kIncreasing;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double term = std::min(1.0, 1.0 / lambda[i]) * (variance[i] - lambda[i] + 2.0 * sum_p_squared[i]);
    b.diagonal_terms.push_back(term);
    b.diagonal_part += term;
  }
  b.cross_part = cross_sum(lambda, covariance);
  b.value = b.diagonal_part + b.cross_part;
  b.negative_warning = b.value < 0.0;
  return b;
}

MomentBound bound_i1(std::span<const double> lambda, std::span<const double> variance,
                     const std::vector<std::vector<double>>& covariance,
                     const std::vector<std::vector<double>>& p_table) {
  std::vector<double> sums;
  for (const auto& row : p_table) {
    double s = 0.0;
    for (double p : row) s += p * p;
    sums.push_back(s);
  }
  return bound_i1(lambda, variance, covariance, sums);
}

MomentBound bound_dd(std::span<const double> lambda, std::span<const double> variance,
                     const std::vector<std::vector<double>>& covariance) {
  check_moment_inputs(lambda, variance, covariance, "bound_dd");
  MomentBound b;
  b.certified = CouplingDirection::kDecreasing;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double term = std::min(1.0, 1.0 / lambda[i]) * (lambda[i] - variance[i]);
    b.diagonal_terms.push_back(term);
    b.diagonal_part += term;
  }
  b.cross_part = -cross_sum(lambda, covariance);
  b.value = b.diagonal_part + b.cross_part;
  b.negative_warning = b.value < 0.0;
  return b;
}

void spot_check_monotone(const IndicatorSumModel& model, CouplingDirection direction, std::size_t runs,
                         std::uint64_t seed) {
  const bool increasing = direction == CouplingDirection::kIncreasing;
  for (std::size_t t = 0; t < runs; ++t) {
    Rng rng = substream(seed, t);
    const ModelState state = model.sample(rng);
    for (std::size_t i = 0; i < model.dimension(); ++i) {
      const std::size_t l = draw_index(model, i, rng);
      const ModelState coupled = model.couple(state, i, l, rng);
      for (std::size_t j = 0; j <= i; ++j) {
        for (std::size_t k = 0; k < model.block_size(j); ++k) {
          if (j == i && k == l) continue;
          const int before = model.indicator(state, j, k) ? 1 : 0;
          const int after = model.indicator(coupled, j, k) ? 1 : 0;
          if (increasing ? after < before : after > before) {
            std::ostringstream msg;
            msg << "coupling is not " << (increasing ? "increasing" : "decreasing") << ": run " << t
                << ", forced indicator (" << i << "," << l << "), indicator (" << j << "," << k << ") went "
                << before << " -> " << after;
            throw InvariantError(msg.str());
          }
        }
      }
    }
  }
}

ExactMoments exact_moments(const IndicatorSumModel& model, const ExhaustiveOptions& options) {
  check_exhaustive(model, options);
  const std::size_t d = model.dimension();
  std::vector<CompensatedSum> first(d);
  std::vector<std::vector<CompensatedSum>> second(d, std::vector<CompensatedSum>(d));
  model.enumerate([&](const ModelState& state, double prob) {
    const auto w = model.counts(state);
    for (std::size_t i = 0; i < d; ++i) {
      first[i].add(prob * static_cast<double>(w[i]));
      for (std::size_t j = 0; j < d; ++j) second[i][j].add(prob * static_cast<double>(w[i] * w[j]));
    }
  });
  ExactMoments m;
  m.mean.resize(d);
  m.covariance.assign(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) m.mean[i] = first[i].value();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) m.covariance[i][j] = second[i][j].value() - m.mean[i] * m.mean[j];
  }
  return m;
}

LatticeDistribution exact_law(const IndicatorSumModel& model, const ExhaustiveOptions& options) {
  check_exhaustive(model, options);
  std::map<LatticePoint, CompensatedSum> acc;
  model.enumerate([&](const ModelState& state, double prob) { acc[model.counts(state)].add(prob); });
  std::vector<LatticeDistribution::Atom> atoms;
  for (auto& [k, v] : acc) atoms.push_back({k, v.value()});
  return LatticeDistribution(model.dimension(), std::move(atoms));
}

nlohmann::json to_json(const BoundReport& report) {
  return {{"mode", to_string(report.mode)},   {"trials", report.trials},
          {"lambda", report.lambda},          {"diag_terms", report.diag_terms},
          {"cross_terms", report.cross_terms}, {"total", report.total},
          {"stderr", {{"diag", report.diag_stderr}, {"cross", report.cross_stderr}}}};
}

}  // namespace mvpois
