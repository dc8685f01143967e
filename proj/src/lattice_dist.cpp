#include "mvpois/lattice_dist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "mvpois/errors.hpp"
#include "mvpois/moments.hpp"
#include "mvpois/stats.hpp"

namespace mvpois {

std::int64_t l1_distance(const LatticePoint& a, const LatticePoint& b) {
  std::int64_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  return d;
}

LatticeDistribution::LatticeDistribution(std::size_t dimension, std::vector<Atom> atoms)
    : LatticeDistribution(dimension, std::move(atoms), true) {}

LatticeDistribution LatticeDistribution::sub_probability(std::size_t dimension, std::vector<Atom> atoms) {
  return LatticeDistribution(dimension, std::move(atoms), false);
}

LatticeDistribution LatticeDistribution::point_mass(LatticePoint point) {
  const std::size_t d = point.size();
  return LatticeDistribution(d, {Atom{std::move(point), 1.0}});
}

LatticeDistribution::LatticeDistribution(std::size_t dimension, std::vector<Atom> atoms, bool probability)
    : dimension_(dimension), probability_(probability) {
  if (dimension == 0) throw ParameterError("lattice distribution: dimension must be positive");
  CompensatedSum total;
  for (auto& atom : atoms) {
    if (atom.point.size() != dimension) {
      throw ParameterError("lattice distribution: atom of dimension " + std::to_string(atom.point.size()) +
                           " in a law of dimension " + std::to_string(dimension));
    }
    for (auto k : atom.point) {
      if (k < 0) throw ParameterError("lattice distribution: negative coordinate");
    }
    if (!(atom.mass >= 0.0) || !std::isfinite(atom.mass)) {
      throw ParameterError("lattice distribution: masses must be finite and non-negative");
    }
    total.add(atom.mass);
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.point < b.point; });
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    if (atoms[i].point == atoms[i - 1].point) {
      throw ParameterError("lattice distribution: duplicate atom");
    }
  }
  std::erase_if(atoms, [](const Atom& a) { return a.mass == 0.0; });
  atoms_ = std::move(atoms);

  const double sum = total.value();
  if (probability_ && std::abs(sum - 1.0) > kMassTolerance) {
    throw ParameterError("lattice distribution: masses sum to " + std::to_string(sum) + ", not 1");
  }
  if (!probability_ && sum > 1.0 + kMassTolerance) {
    throw ParameterError("lattice distribution: sub-probability mass exceeds 1");
  }
}

double LatticeDistribution::total_mass() const {
  CompensatedSum total;
  for (const auto& a : atoms_) total.add(a.mass);
  return total.value();
}

double LatticeDistribution::mass_at(const LatticePoint& point) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), point,
                             [](const Atom& a, const LatticePoint& p) { return a.point < p; });
  return it != atoms_.end() && it->point == point ? it->mass : 0.0;
}

double LatticeDistribution::mean(std::size_t coordinate) const {
  if (coordinate >= dimension_) throw ParameterError("lattice distribution: coordinate out of range");
  CompensatedSum m;
  for (const auto& a : atoms_) m.add(a.mass * static_cast<double>(a.point[coordinate]));
  return m.value();
}

LatticeDistribution LatticeDistribution::leading_marginal(std::size_t k) const {
  if (k == 0 || k > dimension_) throw ParameterError("lattice distribution: invalid marginal size");
  std::map<LatticePoint, CompensatedSum> acc;
  for (const auto& a : atoms_) {
    acc[LatticePoint(a.point.begin(), a.point.begin() + static_cast<std::ptrdiff_t>(k))].add(a.mass);
  }
  std::vector<Atom> out;
  out.reserve(acc.size());
  for (auto& [point, mass] : acc) out.push_back({point, mass.value()});
  return LatticeDistribution(k, std::move(out), probability_);
}

// ---------------------------------------------------------------------------
// Poisson helpers

double poisson_pmf(double lambda, std::int64_t k) {
  if (k < 0) return 0.0;
  const auto kk = static_cast<double>(k);
  return std::exp(kk * std::log(lambda) - lambda - std::lgamma(kk + 1.0));
}

namespace {

// Sums sum_{k > t} weight(k) * pmf(k) with weight(k) = k - t (excess) or 1
// (survival), stopping past the mode once terms drop below 1e-16 relative to
// the accumulated sum and adding a geometric bound for the remainder.
double poisson_upper_series(double lambda, std::int64_t t, bool excess) {
  if (t < 0) {
    return excess ? lambda - static_cast<double>(t) : 1.0;
  }
  // Below the mode the complement is better conditioned.
  if (static_cast<double>(t) < lambda) {
    CompensatedSum head;
    CompensatedSum head_weighted;
    for (std::int64_t k = 0; k <= t; ++k) {
      const double pk = poisson_pmf(lambda, k);
      head.add(pk);
      head_weighted.add(static_cast<double>(k) * pk);
    }
    const double survival = std::max(0.0, 1.0 - head.value());
    if (!excess) return survival;
    // E[(P - t)^+] = lambda - E[P; P <= t] - t P(P > t)
    return std::max(0.0, lambda - head_weighted.value() - static_cast<double>(t) * survival);
  }
  CompensatedSum sum;
  for (std::int64_t k = t + 1;; ++k) {
    const double weight = excess ? static_cast<double>(k - t) : 1.0;
    const double term = weight * poisson_pmf(lambda, k);
    sum.add(term);
    const double next_weight = excess ? static_cast<double>(k + 1 - t) : 1.0;
    const double ratio = next_weight / weight * lambda / static_cast<double>(k + 1);
    if (ratio < 0.5 && term <= 1e-16 * std::max(sum.value(), 1e-300)) {
      sum.add(term * ratio / (1.0 - ratio));
      break;
    }
    if (term == 0.0 && static_cast<double>(k) > lambda) break;
  }
  return sum.value();
}

}  // namespace

double poisson_survival(double lambda, std::int64_t t) { return poisson_upper_series(lambda, t, false); }

double poisson_excess_mean(double lambda, std::int64_t t) { return poisson_upper_series(lambda, t, true); }

TruncatedPoissonProduct poisson_product_truncated(std::span<const double> lambda, double eps) {
  if (lambda.empty()) throw ParameterError("poisson_product_truncated: empty lambda");
  for (double l : lambda) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ParameterError("poisson_product_truncated: lambda must be positive");
  }
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("poisson_product_truncated: eps must lie in (0,1)");

  const std::size_t d = lambda.size();
  const double per_coordinate = eps / static_cast<double>(d);

  TruncatedPoissonProduct out{std::vector<double>(lambda.begin(), lambda.end()), LatticePoint(d, 0),
                              LatticeDistribution::sub_probability(d, {}), 0.0, 0.0};
  std::vector<std::vector<double>> pmf(d);
  double log_inside = 0.0;
  double excess = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    std::int64_t t = 0;
    double survival = poisson_survival(lambda[i], t);
    while (survival > per_coordinate) survival = poisson_survival(lambda[i], ++t);
    out.caps[i] = t;
    log_inside += std::log1p(-survival);
    excess += poisson_excess_mean(lambda[i], t);
    for (std::int64_t k = 0; k <= t; ++k) pmf[i].push_back(poisson_pmf(lambda[i], k));
  }
  out.tail_mass = -std::expm1(log_inside);

  std::vector<LatticeDistribution::Atom> atoms;
  LatticePoint point(d, 0);
  while (true) {
    double mass = 1.0;
    for (std::size_t i = 0; i < d; ++i) mass *= pmf[i][static_cast<std::size_t>(point[i])];
    atoms.push_back({point, mass});
    std::size_t i = 0;
    while (i < d && point[i] == out.caps[i]) point[i++] = 0;
    if (i == d) break;
    ++point[i];
  }
  out.body = LatticeDistribution::sub_probability(d, std::move(atoms));

  double cap_sum = 0.0;
  for (auto t : out.caps) cap_sum += static_cast<double>(t);
  out.dw_error_budget = excess + cap_sum * out.tail_mass;
  return out;
}

LatticeDistribution TruncatedPoissonProduct::collapsed() const {
  std::vector<LatticeDistribution::Atom> atoms(body.atoms().begin(), body.atoms().end());
  bool placed = false;
  for (auto& a : atoms) {
    if (a.point == caps) {
      a.mass += tail_mass;
      placed = true;
    }
  }
  if (!placed && tail_mass > 0.0) atoms.push_back({caps, tail_mass});
  // Rounding in the body sum is far below the mass tolerance; renormalize it away.
  CompensatedSum total;
  for (const auto& a : atoms) total.add(a.mass);
  const double scale = 1.0 / total.value();
  for (auto& a : atoms) a.mass *= scale;
  return LatticeDistribution(body.dimension(), std::move(atoms));
}

// ---------------------------------------------------------------------------

double tv_distance(const LatticeDistribution& p, const LatticeDistribution& q) {
  if (p.dimension() != q.dimension()) throw ParameterError("tv_distance: dimension mismatch");
  CompensatedSum sum;
  auto a = p.atoms();
  auto b = q.atoms();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].point < b[j].point)) {
      sum.add(a[i++].mass);
    } else if (i == a.size() || b[j].point < a[i].point) {
      sum.add(b[j++].mass);
    } else {
      sum.add(std::abs(a[i++].mass - b[j++].mass));
    }
  }
  return std::min(1.0, 0.5 * sum.value());
}

LatticeDistribution empirical_distribution(std::span<const LatticePoint> samples) {
  if (samples.empty()) throw ParameterError("empirical_distribution: no samples");
  const std::size_t d = samples.front().size();
  std::map<LatticePoint, std::size_t> counts;
  for (const auto& s : samples) {
    if (s.size() != d) throw ParameterError("empirical_distribution: inconsistent sample dimension");
    ++counts[s];
  }
  const auto n = static_cast<double>(samples.size());
  std::vector<LatticeDistribution::Atom> atoms;
  atoms.reserve(counts.size());
  for (const auto& [point, c] : counts) atoms.push_back({point, static_cast<double>(c) / n});
  return LatticeDistribution(d, std::move(atoms));
}

nlohmann::json to_json(const LatticeDistribution& dist) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : dist.atoms()) atoms.push_back(nlohmann::json::array({a.point, a.mass}));
  return {{"d", dist.dimension()}, {"atoms", atoms}};
}

LatticeDistribution lattice_distribution_from_json(const nlohmann::json& j) {
  try {
    const auto d = j.at("d").get<std::size_t>();
    std::vector<LatticeDistribution::Atom> atoms;
    for (const auto& entry : j.at("atoms")) {
      atoms.push_back({entry.at(0).get<LatticePoint>(), entry.at(1).get<double>()});
    }
    return LatticeDistribution(d, std::move(atoms));
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("lattice distribution json: ") + e.what());
  }
}

MomentSet moments_of(const LatticeDistribution& law) {
  const std::size_t d = law.dimension();
  std::vector<CompensatedSum> first(d);
  for (const auto& a : law.atoms()) {
    for (std::size_t i = 0; i < d; ++i) first[i].add(a.mass * static_cast<double>(a.point[i]));
  }
  MomentSet out;
  for (auto& f : first) out.lambda.push_back(f.value());
  // Central moments directly, to avoid cancellation in E[W_i W_j] - E[W_i]E[W_j].
  std::vector<std::vector<CompensatedSum>> second(d, std::vector<CompensatedSum>(d));
  for (const auto& a : law.atoms()) {
    for (std::size_t i = 0; i < d; ++i) {
      const double xi = static_cast<double>(a.point[i]) - out.lambda[i];
      for (std::size_t j = 0; j <= i; ++j) {
        second[i][j].add(a.mass * xi * (static_cast<double>(a.point[j]) - out.lambda[j]));
      }
    }
  }
  out.covariance.assign(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) out.covariance[i][j] = out.covariance[j][i] = second[i][j].value();
    out.variance.push_back(out.covariance[i][i]);
  }
  return out;
}

}  // namespace mvpois
