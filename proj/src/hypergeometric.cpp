#include "mvpois/hypergeometric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mvpois/errors.hpp"
#include "mvpois/stats.hpp"

namespace mvpois {

UrnSpec UrnSpec::make(std::vector<std::size_t> colors, std::size_t m) {
  UrnSpec u;
  u.N = std::accumulate(colors.begin(), colors.end(), std::size_t{0});
  u.tracked = colors.size();
  u.colors = std::move(colors);
  u.m = m;
  u.validate();
  return u;
}

UrnSpec UrnSpec::with_background(std::vector<std::size_t> colors, std::size_t m) {
  UrnSpec u = make(std::move(colors), m);
  if (u.colors.size() < 2) throw ParameterError("urn: a background color needs at least one tracked color");
  u.tracked = u.colors.size() - 1;
  return u;
}

void UrnSpec::validate() const {
  if (colors.empty()) throw ParameterError("urn: no colors given");
  if (std::accumulate(colors.begin(), colors.end(), std::size_t{0}) != N) {
    throw ParameterError("urn: color counts must sum to N");
  }
  if (std::find(colors.begin(), colors.end(), std::size_t{0}) != colors.end()) {
    throw ParameterError("urn: every color needs at least one ball");
  }
  if (m < 1 || m > N) throw ParameterError("urn: draw size m must satisfy 1 <= m <= N");
  if (tracked < 1 || tracked > colors.size()) throw ParameterError("urn: invalid number of tracked colors");
}

namespace {

std::size_t background(const UrnSpec& urn) {
  return std::accumulate(urn.colors.begin() + static_cast<std::ptrdiff_t>(urn.tracked), urn.colors.end(),
                         std::size_t{0});
}

}  // namespace

LatticeDistribution exact_pmf(const UrnSpec& urn) {
  urn.validate();
  const std::size_t d = urn.tracked;
  const std::size_t rest = background(urn);
  const bool log_space = urn.N > 60;
  const auto N = static_cast<std::int64_t>(urn.N);
  const auto m = static_cast<std::int64_t>(urn.m);
  const double total = binomial(N, m);
  // log C(n, k) for k = 0..min(n, m) by the ratio recurrence; lgamma differences
  // lose too much at N in the thousands.
  auto log_row = [&](std::size_t n) {
    std::vector<double> row(1, 0.0);
    for (std::size_t k = 1; k <= std::min<std::size_t>(n, urn.m); ++k) {
      row.push_back(row.back() + std::log(static_cast<double>(n - k + 1) / static_cast<double>(k)));
    }
    return row;
  };
  std::vector<std::vector<double>> log_c;
  if (log_space) {
    for (std::size_t c = 0; c < d; ++c) log_c.push_back(log_row(urn.colors[c]));
  }
  const auto log_rest = log_space ? log_row(rest) : std::vector<double>{};
  const double log_total = log_space ? log_row(urn.N).back() : 0.0;

  std::vector<LatticeDistribution::Atom> atoms;
  LatticePoint k(d, 0);
  // Depth-first over k_1..k_d with sum(k) <= m and the remainder drawn from the background.
  auto visit = [&](auto&& self, std::size_t i, std::int64_t used) -> void {
    if (i == d) {
      const std::int64_t left = m - used;
      if (left > static_cast<std::int64_t>(rest)) return;
      if (atoms.size() >= kMaxUrnAtoms) {
        throw ResourceError("exact_pmf: support exceeds the cap of " + std::to_string(kMaxUrnAtoms) + " atoms");
      }
      double mass;
      if (log_space) {
        double lg = log_rest[static_cast<std::size_t>(left)] - log_total;
        for (std::size_t c = 0; c < d; ++c) lg += log_c[c][static_cast<std::size_t>(k[c])];
        mass = std::exp(lg);
      } else {
        mass = binomial(static_cast<std::int64_t>(rest), left);
        for (std::size_t c = 0; c < d; ++c) mass *= binomial(static_cast<std::int64_t>(urn.colors[c]), k[c]);
        mass /= total;
      }
      atoms.push_back({k, mass});
      return;
    }
    const auto cap = std::min<std::int64_t>(static_cast<std::int64_t>(urn.colors[i]), m - used);
    for (std::int64_t x = 0; x <= cap; ++x) {
      k[i] = x;
      self(self, i + 1, used + x);
    }
    k[i] = 0;
  };
  visit(visit, 0, 0);
  return LatticeDistribution(d, std::move(atoms));
}

MomentSet moments(const UrnSpec& urn) {
  urn.validate();
  const double N = static_cast<double>(urn.N);
  const double m = static_cast<double>(urn.m);
  // (N - m) / (N - 1), zero for the one-ball urn
  const double fpc = urn.N > 1 ? (N - m) / (N - 1.0) : 0.0;
  MomentSet out;
  const std::size_t d = urn.tracked;
  out.covariance.assign(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    const double ni = static_cast<double>(urn.colors[i]);
    out.lambda.push_back(m * ni / N);
    const double var = m * ni * (N - ni) / (N * N) * fpc;
    out.variance.push_back(var);
    out.covariance[i][i] = var;
    for (std::size_t j = 0; j < i; ++j) {
      const double nj = static_cast<double>(urn.colors[j]);
      out.covariance[i][j] = out.covariance[j][i] = -m * ni * nj / (N * N) * fpc;
    }
  }
  return out;
}

UrnBound theorem_bound_urn(const UrnSpec& urn) {
  urn.validate();
  const double N = static_cast<double>(urn.N);
  const double m = static_cast<double>(urn.m);
  const double denom = N * (N - 1.0);
  UrnBound b;
  CompensatedSum total;
  for (std::size_t i = 0; i < urn.tracked; ++i) {
    const double ni = static_cast<double>(urn.colors[i]);
    const double keep = urn.N > 1 ? (N - ni) * (N - m) / denom : 0.0;
    const double term = std::min(1.0, m * ni / N) * (1.0 - keep);
    b.diag_terms.push_back(term);
    total.add(term);
  }
  CompensatedSum prefix_n;
  CompensatedSum sum_n;
  CompensatedSum sum_lambda;
  for (std::size_t i = 1; i < urn.tracked; ++i) {
    prefix_n.add(static_cast<double>(urn.colors[i - 1]));
    sum_n.add(prefix_n.value());
  }
  for (std::size_t i = 1; i < urn.tracked; ++i) {
    for (std::size_t j = 0; j < i; ++j) sum_lambda.add(m * static_cast<double>(urn.colors[j]) / N);
  }
  if (urn.N > 1) {
    b.cross_statement = 2.0 * (N - m) / denom * sum_n.value();
    b.cross_proof = 2.0 * (N - m) / (m * (N - 1.0)) * sum_lambda.value();
  }
  total.add(b.cross_statement);
  b.value = total.value();
  b.vacuous = urn.m == urn.N || b.value >= 1.0;
  return b;
}

std::vector<std::int64_t> sample_urn(const UrnSpec& urn, Rng& rng) {
  urn.validate();
  std::vector<std::size_t> left = urn.colors;
  std::size_t remaining = urn.N;
  std::vector<std::int64_t> out(urn.colors.size(), 0);
  for (std::size_t draw = 0; draw < urn.m; ++draw) {
    std::size_t r = std::uniform_int_distribution<std::size_t>(0, remaining - 1)(rng);
    std::size_t c = 0;
    while (r >= left[c]) r -= left[c++];
    --left[c];
    --remaining;
    ++out[c];
  }
  out.resize(urn.tracked);
  return out;
}

std::vector<std::int64_t> sample_urn(const UrnSpec& urn, std::uint64_t seed) {
  Rng rng(seed);
  return sample_urn(urn, rng);
}

UrnIndicatorModel::UrnIndicatorModel(UrnSpec urn) : urn_(std::move(urn)) {
  urn_.validate();
  std::size_t offset = 0;
  for (auto c : urn_.colors) {
    offsets_.push_back(offset);
    offset += c;
  }
}

double UrnIndicatorModel::marginal(std::size_t, std::size_t) const {
  return static_cast<double>(urn_.m) / static_cast<double>(urn_.N);
}

bool UrnIndicatorModel::indicator(const ModelState& state, std::size_t i, std::size_t j) const {
  return state[ball(i, j)] != 0;
}

std::vector<std::int64_t> UrnIndicatorModel::counts(const ModelState& state) const {
  std::vector<std::int64_t> w(urn_.tracked, 0);
  for (std::size_t i = 0; i < urn_.tracked; ++i) {
    for (std::size_t j = 0; j < urn_.colors[i]; ++j) w[i] += state[ball(i, j)];
  }
  return w;
}

ModelState UrnIndicatorModel::sample(Rng& rng) const {
  std::vector<std::size_t> balls(urn_.N);
  std::iota(balls.begin(), balls.end(), std::size_t{0});
  ModelState s(urn_.N, 0);
  for (std::size_t k = 0; k < urn_.m; ++k) {
    const std::size_t r = std::uniform_int_distribution<std::size_t>(k, urn_.N - 1)(rng);
    std::swap(balls[k], balls[r]);
    s[balls[k]] = 1;
  }
  return s;
}

ModelState UrnIndicatorModel::couple(const ModelState& state, std::size_t i, std::size_t l, Rng& rng) const {
  const std::size_t b = ball(i, l);
  if (state[b]) return state;
  std::vector<std::size_t> in_sample;
  for (std::size_t x = 0; x < urn_.N; ++x) {
    if (state[x]) in_sample.push_back(x);
  }
  ModelState s = state;
  s[in_sample[std::uniform_int_distribution<std::size_t>(0, in_sample.size() - 1)(rng)]] = 0;
  s[b] = 1;
  return s;
}

void UrnIndicatorModel::enumerate(const StateVisitor& visit) const {
  const double subsets = binomial(static_cast<std::int64_t>(urn_.N), static_cast<std::int64_t>(urn_.m));
  if (subsets > static_cast<double>(1u << 24)) {
    throw ResourceError("UrnIndicatorModel: more than 2^24 samples to enumerate");
  }
  const double prob = 1.0 / subsets;
  std::vector<char> pick(urn_.N, 0);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(urn_.m), 1);
  ModelState s(urn_.N);
  do {
    for (std::size_t x = 0; x < urn_.N; ++x) s[x] = static_cast<std::uint8_t>(pick[x]);
    visit(s, prob);
  } while (std::prev_permutation(pick.begin(), pick.end()));
}

void UrnIndicatorModel::coupled_law(const ModelState& state, std::size_t i, std::size_t l,
                                    const StateVisitor& visit) const {
  const std::size_t b = ball(i, l);
  if (state[b]) {
    visit(state, 1.0);
    return;
  }
  const double q = 1.0 / static_cast<double>(urn_.m);
  for (std::size_t x = 0; x < urn_.N; ++x) {
    if (!state[x]) continue;
    ModelState s = state;
    s[x] = 0;
    s[b] = 1;
    visit(s, q);
  }
}

CouplingRun urn_coupling(const UrnSpec& urn, Rng& rng) { return construct_coupling(UrnIndicatorModel(urn), rng); }

CouplingRun urn_coupling(const UrnSpec& urn, std::uint64_t seed) {
  Rng rng(seed);
  return urn_coupling(urn, rng);
}

PoissonComparison exact_dw_urn(const UrnSpec& urn, double eps_trunc, const TransportOptions& options) {
  const auto law = exact_pmf(urn);
  const auto target = poisson_product_truncated(moments(urn).lambda, eps_trunc);
  return compare_to_poisson(law, target, options);
}

}  // namespace mvpois
