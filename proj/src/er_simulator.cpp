#include "mvpois/er_simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_set>

#include "mvpois/errors.hpp"

namespace mvpois {

SampledGraph::SampledGraph(std::size_t n)
    : n_(n), words_per_row_((n + 63) / 64), matrix_(n * ((n + 63) / 64), 0), adjacency_(n) {}

bool SampledGraph::has_edge(int a, int b) const {
  const auto row = static_cast<std::size_t>(a) * words_per_row_;
  const auto col = static_cast<std::size_t>(b);
  return (matrix_[row + col / 64] >> (col % 64)) & 1u;
}

bool SampledGraph::add_edge(int a, int b) {
  if (a == b || a < 0 || b < 0 || static_cast<std::size_t>(a) >= n_ || static_cast<std::size_t>(b) >= n_) {
    throw ParameterError("SampledGraph::add_edge: invalid vertex pair");
  }
  if (has_edge(a, b)) return false;
  const auto ua = static_cast<std::size_t>(a);
  const auto ub = static_cast<std::size_t>(b);
  matrix_[ua * words_per_row_ + ub / 64] |= std::uint64_t{1} << (ub % 64);
  matrix_[ub * words_per_row_ + ua / 64] |= std::uint64_t{1} << (ua % 64);
  adjacency_[ua].push_back(b);
  adjacency_[ub].push_back(a);
  ++edges_;
  return true;
}

void SampledGraph::remove_edge(int a, int b) {
  if (!has_edge(a, b)) return;
  const auto ua = static_cast<std::size_t>(a);
  const auto ub = static_cast<std::size_t>(b);
  matrix_[ua * words_per_row_ + ub / 64] &= ~(std::uint64_t{1} << (ub % 64));
  matrix_[ub * words_per_row_ + ua / 64] &= ~(std::uint64_t{1} << (ua % 64));
  auto drop = [](std::vector<int>& list, int x) {
    auto it = std::find(list.begin(), list.end(), x);
    *it = list.back();
    list.pop_back();
  };
  drop(adjacency_[ua], b);
  drop(adjacency_[ub], a);
  --edges_;
}

EdgeList SampledGraph::edges() const {
  EdgeList out;
  for (std::size_t a = 0; a < n_; ++a) {
    for (int b : adjacency_[a]) {
      if (static_cast<int>(a) < b) out.emplace_back(static_cast<int>(a), b);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string SampledGraph::to_edge_list_text() const {
  std::ostringstream os;
  os << n_ << ' ' << edges_ << '\n';
  for (const auto& [a, b] : edges()) os << a + 1 << ' ' << b + 1 << '\n';
  return os.str();
}

SampledGraph sample_gnp(std::size_t n, double p, Rng& rng) {
  if (n == 0) throw ParameterError("sample_gnp: n must be at least 1");
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("sample_gnp: p must lie in (0, 1)");
  SampledGraph g(n);
  // Walk the pairs (v, w), w < v, in order, jumping over geometric gaps.
  const double log_q = std::log1p(-p);
  std::int64_t v = 1;
  std::int64_t w = -1;
  const auto nn = static_cast<std::int64_t>(n);
  while (v < nn) {
    const double r = uniform01(rng);
    const double jump = std::floor(std::log1p(-r) / log_q);
    if (jump > 1e15) break;
    w += 1 + static_cast<std::int64_t>(jump);
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) g.add_edge(static_cast<int>(v), static_cast<int>(w));
  }
  return g;
}

SampledGraph sample_gnp(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  return sample_gnp(n, p, rng);
}

SubgraphCounter::SubgraphCounter(std::vector<PatternGraph> patterns) {
  for (auto& h : patterns) {
    const std::size_t v = h.vertex_count();
    std::vector<std::vector<int>> adj(v);
    for (const auto& [a, b] : h.edges()) {
      adj[static_cast<std::size_t>(a)].push_back(b);
      adj[static_cast<std::size_t>(b)].push_back(a);
    }
    // Next vertex: most already-placed neighbours, then highest degree.
    std::vector<int> order;
    std::vector<char> placed(v, 0);
    for (std::size_t step = 0; step < v; ++step) {
      int best = -1;
      std::size_t best_links = 0;
      for (std::size_t x = 0; x < v; ++x) {
        if (placed[x]) continue;
        std::size_t links = 0;
        for (int y : adj[x]) links += placed[static_cast<std::size_t>(y)] ? 1 : 0;
        if (best < 0 || links > best_links ||
            (links == best_links && adj[x].size() > adj[static_cast<std::size_t>(best)].size())) {
          best = static_cast<int>(x);
          best_links = links;
        }
      }
      placed[static_cast<std::size_t>(best)] = 1;
      order.push_back(best);
    }
    std::vector<int> position(v);
    for (std::size_t k = 0; k < v; ++k) position[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
    Plan plan{h, automorphism_count(h), order, std::vector<std::vector<int>>(v), std::vector<int>(v),
              labeled_copies(h)};
    for (std::size_t k = 0; k < v; ++k) {
      const auto x = static_cast<std::size_t>(order[k]);
      plan.degree[k] = static_cast<int>(adj[x].size());
      for (int y : adj[x]) {
        if (position[static_cast<std::size_t>(y)] < static_cast<int>(k)) {
          plan.back_adj[k].push_back(position[static_cast<std::size_t>(y)]);
        }
      }
    }
    plans_.push_back(std::move(plan));
  }
}

namespace {

struct Search {
  const SampledGraph& g;
  const std::vector<std::vector<int>>& back_adj;
  const std::vector<int>& degree;
  std::vector<int> image;
  std::vector<char> used;
  std::uint64_t found = 0;

  bool fits(std::size_t k, int x) const {
    if (used[static_cast<std::size_t>(x)]) return false;
    if (static_cast<int>(g.neighbors(x).size()) < degree[k]) return false;
    for (int b : back_adj[k]) {
      if (!g.has_edge(x, image[static_cast<std::size_t>(b)])) return false;
    }
    return true;
  }

  void extend(std::size_t k) {
    if (k == image.size()) {
      ++found;
      return;
    }
    auto place = [&](int x) {
      if (!fits(k, x)) return;
      image[k] = x;
      used[static_cast<std::size_t>(x)] = 1;
      extend(k + 1);
      used[static_cast<std::size_t>(x)] = 0;
    };
    if (back_adj[k].empty()) {
      for (std::size_t x = 0; x < g.vertex_count(); ++x) place(static_cast<int>(x));
    } else {
      for (int x : g.neighbors(image[static_cast<std::size_t>(back_adj[k].front())])) place(x);
    }
  }
};

}  // namespace

std::uint64_t SubgraphCounter::injections(const SampledGraph& g, const Plan& plan) const {
  const std::size_t v = plan.order.size();
  if (v > g.vertex_count()) return 0;
  Search s{g, plan.back_adj, plan.degree, std::vector<int>(v, -1), std::vector<char>(g.vertex_count(), 0)};
  s.extend(0);
  return s.found;
}

std::int64_t SubgraphCounter::count(const SampledGraph& g, std::size_t i) const {
  const Plan& plan = plans_.at(i);
  const std::uint64_t maps = injections(g, plan);
  if (maps % plan.automorphisms != 0) {
    throw InvariantError("count_copies_joint: " + std::to_string(maps) + " embeddings of " + plan.pattern.name() +
                         " not divisible by " + std::to_string(plan.automorphisms) + " automorphisms");
  }
  return static_cast<std::int64_t>(maps / plan.automorphisms);
}

std::vector<std::int64_t> SubgraphCounter::count(const SampledGraph& g) const {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < plans_.size(); ++i) out.push_back(count(g, i));
  return out;
}

std::vector<std::int64_t> count_copies_joint(const SampledGraph& g, const std::vector<PatternGraph>& patterns) {
  return SubgraphCounter(patterns).count(g);
}

namespace {

// Uniform v-subset of {0..n-1} (Floyd's algorithm).
std::vector<int> uniform_subset(std::size_t n, std::size_t v, Rng& rng) {
  std::vector<int> out;
  std::unordered_set<int> seen;
  for (std::size_t j = n - v; j < n; ++j) {
    const int t = static_cast<int>(std::uniform_int_distribution<std::size_t>(0, j)(rng));
    const int pick = seen.count(t) ? static_cast<int>(j) : t;
    seen.insert(pick);
    out.push_back(pick);
  }
  return out;
}

// Forces a uniform copy of pattern i into `g`, counts patterns 0..i, and
// restores `g`.
GraphCouplingRow coupled_row(SampledGraph& g, const SubgraphCounter& counter, std::size_t i, Rng& rng,
                             std::vector<std::int64_t> w) {
  const PatternGraph& h = counter.pattern(i);
  const auto vertices = uniform_subset(g.vertex_count(), h.vertex_count(), rng);
  const auto& labeled = counter.labeled(i);
  const auto& copy = labeled[std::uniform_int_distribution<std::size_t>(0, labeled.size() - 1)(rng)];

  GraphCouplingRow row;
  row.w = std::move(w);
  row.forced_copy = relabel(copy, vertices);
  EdgeList added;
  for (const auto& [a, b] : row.forced_copy) {
    if (g.add_edge(a, b)) added.emplace_back(a, b);
  }
  row.added_edges = added.size();
  // alpha is a copy in G u alpha, so counting it with the others is the same
  // as counting the copies other than alpha and adding one.
  for (std::size_t j = 0; j <= i; ++j) row.w_tilde.push_back(counter.count(g, j));
  for (const auto& [a, b] : added) g.remove_edge(a, b);
  return row;
}

}  // namespace

GraphCouplingRow graph_coupling(const SampledGraph& g, const SubgraphCounter& counter, std::size_t i, Rng& rng) {
  if (i >= counter.dimension()) throw ParameterError("graph_coupling: pattern index out of range");
  SampledGraph scratch = g;
  return coupled_row(scratch, counter, i, rng, counter.count(g));
}

GraphCouplingRow graph_coupling(const SampledGraph& g, const std::vector<PatternGraph>& patterns, std::size_t i,
                                std::uint64_t seed) {
  Rng rng(seed);
  return graph_coupling(g, SubgraphCounter(patterns), i, rng);
}

GraphIndicatorModel::GraphIndicatorModel(std::vector<PatternGraph> patterns, std::size_t n, double p)
    : patterns_(std::move(patterns)), n_(n), p_(p), pairs_(n * (n - 1) / 2) {
  if (n > kMaxHostVertices) {
    throw ResourceError("GraphIndicatorModel: host of " + std::to_string(n) + " vertices exceeds the cap of " +
                        std::to_string(kMaxHostVertices));
  }
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("GraphIndicatorModel: p must lie in (0, 1)");
  for (const auto& h : patterns_) {
    std::vector<std::vector<std::size_t>> block;
    for (const auto& mask : enumerate_copies(h, n)) {
      std::vector<std::size_t> pairs;
      for (std::size_t b = 0; b < pairs_; ++b) {
        if (mask.test(b)) pairs.push_back(b);
      }
      block.push_back(std::move(pairs));
    }
    if (block.empty()) throw ParameterError("GraphIndicatorModel: pattern " + h.name() + " does not fit in K_n");
    copies_.push_back(std::move(block));
  }
}

double GraphIndicatorModel::marginal(std::size_t i, std::size_t) const {
  return std::pow(p_, static_cast<double>(patterns_[i].edge_count()));
}

bool GraphIndicatorModel::indicator(const ModelState& state, std::size_t i, std::size_t j) const {
  for (auto b : copies_[i][j]) {
    if (!state[b]) return false;
  }
  return true;
}

ModelState GraphIndicatorModel::sample(Rng& rng) const {
  ModelState s(pairs_);
  for (auto& x : s) x = uniform01(rng) < p_ ? 1 : 0;
  return s;
}

ModelState GraphIndicatorModel::couple(const ModelState& state, std::size_t i, std::size_t l, Rng&) const {
  ModelState s = state;
  for (auto b : copies_[i][l]) s[b] = 1;
  return s;
}

void GraphIndicatorModel::enumerate(const StateVisitor& visit) const {
  if (pairs_ > 24) throw ResourceError("GraphIndicatorModel: more than 2^24 graphs to enumerate");
  ModelState s(pairs_);
  for (std::uint32_t mask = 0; mask < (1u << pairs_); ++mask) {
    for (std::size_t b = 0; b < pairs_; ++b) s[b] = (mask >> b) & 1u;
    const int k = std::popcount(mask);
    visit(s, std::pow(p_, k) * std::pow(1.0 - p_, static_cast<double>(pairs_) - k));
  }
}

void GraphIndicatorModel::coupled_law(const ModelState& state, std::size_t i, std::size_t l,
                                      const StateVisitor& visit) const {
  Rng unused;
  visit(couple(state, i, l, unused), 1.0);
}

BoundReport mc_coupling_terms(const GraphEnsembleSpec& spec, std::size_t trials, std::uint64_t seed) {
  spec.validate();
  if (trials == 0) throw ParameterError("mc_coupling_terms: trials must be at least 1");
  const std::size_t d = spec.patterns.size();
  const SubgraphCounter counter(spec.patterns);
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
    SampledGraph g = sample_gnp(spec.n, spec.p, rng);
    const auto w = counter.count(g);
    for (std::size_t i = 0; i < d; ++i) {
      const auto row = coupled_row(g, counter, i, rng, w);
      diag[i].add(static_cast<double>(std::abs(row.w_tilde[i] - 1 - w[i])));
      shift[i].add(static_cast<double>(row.w_tilde[i] - w[i]));
      for (std::size_t j = 0; j < i; ++j) {
        cross[i][j].add(static_cast<double>(std::abs(row.w_tilde[j] - w[j])));
        cross_shift[i][j].add(static_cast<double>(row.w_tilde[j] - w[j]));
      }
    }
  }
  BoundReport r;
  r.mode = BoundMode::kMonteCarlo;
  r.trials = trials;
  for (std::size_t i = 0; i < d; ++i) {
    r.lambda.push_back(expected_count(spec.patterns[i], spec.n, spec.p));
    r.diag_terms.push_back(diag[i].mean());
    r.diag_stderr.push_back(diag[i].standard_error());
    r.diag_shift.push_back(shift[i].mean());
    r.diag_shift_stderr.push_back(shift[i].standard_error());
    r.cross_terms.emplace_back();
    r.cross_stderr.emplace_back();
    r.cross_shift.emplace_back();
    r.cross_shift_stderr.emplace_back();
    for (std::size_t j = 0; j < i; ++j) {
      r.cross_terms[i].push_back(cross[i][j].mean());
      r.cross_stderr[i].push_back(cross[i][j].standard_error());
      r.cross_shift[i].push_back(cross_shift[i][j].mean());
      r.cross_shift_stderr[i].push_back(cross_shift[i][j].standard_error());
    }
  }
  r.total = bound_t1(r);
  return r;
}

namespace {

double sample_sd(const std::vector<double>& xs) {
  RunningStats s;
  for (double x : xs) s.add(x);
  return std::sqrt(s.variance());
}

}  // namespace

DistanceEstimate empirical_distance(const std::vector<LatticePoint>& samples, std::span<const double> lambda,
                                    std::uint64_t seed, const DistanceOptions& options) {
  if (samples.empty()) throw ParameterError("empirical_distance: no samples");
  const std::size_t d = lambda.size();
  const auto target = poisson_product_truncated(lambda, options.eps_trunc);
  const LatticeDistribution collapsed = target.collapsed();

  std::map<LatticePoint, std::size_t> tally;
  std::vector<RunningStats> coord(d);
  for (const auto& s : samples) {
    if (s.size() != d) throw ParameterError("empirical_distance: sample dimension differs from lambda");
    ++tally[s];
    for (std::size_t i = 0; i < d; ++i) coord[i].add(static_cast<double>(s[i]));
  }
  const double total = static_cast<double>(samples.size());
  std::vector<LatticePoint> points;
  std::vector<double> freq;
  for (const auto& [pt, c] : tally) {
    points.push_back(pt);
    freq.push_back(static_cast<double>(c) / total);
  }
  auto law_from = [&](const std::vector<std::size_t>& counts) {
    std::vector<LatticeDistribution::Atom> atoms;
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (counts[k] > 0) atoms.push_back({points[k], static_cast<double>(counts[k]) / total});
    }
    return LatticeDistribution(d, std::move(atoms));
  };

  DistanceEstimate out;
  out.trials = samples.size();
  out.lambda.assign(lambda.begin(), lambda.end());
  std::vector<std::size_t> base;
  for (const auto& [pt, c] : tally) base.push_back(c);
  const auto cmp = compare_to_poisson(law_from(base), target, options.transport);
  out.dw = cmp.dw;
  out.dw_budget = cmp.dw_budget;
  out.tv = cmp.tv;
  out.tv_budget = cmp.tv_budget;
  for (std::size_t i = 0; i < d; ++i) {
    out.sample_mean.push_back(coord[i].mean());
    out.sample_mean_stderr.push_back(coord[i].standard_error());
  }

  // Resampling with replacement is a multinomial draw over the distinct atoms.
  Rng rng = substream(seed, 0xb007'57a9ULL);
  std::vector<double> tv_reps;
  for (std::size_t b = 0; b < options.bootstrap; ++b) {
    std::vector<std::size_t> counts(points.size(), 0);
    std::size_t left = samples.size();
    double mass_left = 1.0;
    for (std::size_t k = 0; k + 1 < points.size() && left > 0; ++k) {
      const double q = std::clamp(freq[k] / mass_left, 0.0, 1.0);
      counts[k] = std::binomial_distribution<std::size_t>(left, q)(rng);
      left -= counts[k];
      mass_left -= freq[k];
    }
    counts.back() += left;
    const auto law = law_from(counts);
    out.dw_replicates.push_back(wasserstein_distance(law, collapsed, options.transport));
    tv_reps.push_back(tv_distance(law, collapsed));
  }
  if (options.bootstrap > 1) {
    out.dw_stderr = sample_sd(out.dw_replicates);
    out.tv_stderr = sample_sd(tv_reps);
  }
  return out;
}

DistanceEstimate mc_empirical_distance(const GraphEnsembleSpec& spec, std::size_t trials, std::uint64_t seed,
                                       const DistanceOptions& options) {
  spec.validate();
  if (trials == 0) throw ParameterError("mc_empirical_distance: trials must be at least 1");
  const SubgraphCounter counter(spec.patterns);
  std::vector<LatticePoint> samples;
  samples.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = substream(seed, t);
    samples.push_back(counter.count(sample_gnp(spec.n, spec.p, rng)));
  }
  std::vector<double> lambda;
  for (const auto& h : spec.patterns) lambda.push_back(expected_count(h, spec.n, spec.p));
  try {
    return empirical_distance(samples, lambda, seed, options);
  } catch (const ResourceError& e) {
    throw ResourceError(std::string(e.what()) + "; try a larger eps_trunc or fewer patterns");
  }
}

RateSweepResult rate_sweep(const std::vector<PatternGraph>& patterns, double c, double alpha,
                           std::vector<std::size_t> n_list, std::size_t trials, std::uint64_t seed,
                           const DistanceOptions& options) {
  std::sort(n_list.begin(), n_list.end());
  n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
  if (n_list.empty()) throw ParameterError("rate_sweep: empty n list");
  RateSweepResult result;
  for (const auto& h : patterns) {
    if (classify(h, alpha) != Regime::kCritical) {
      result.warnings.push_back(h.name() + " is " + to_string(classify(h, alpha)) + " at alpha = " +
                                std::to_string(alpha) + "; the sweep targets critical patterns");
    }
  }
  const GraphMomentEngine engine(patterns);
  for (auto n : n_list) {
    RateSweepRow row;
    row.n = n;
    row.p = edge_probability(c, alpha, n);
    row.trials = trials;
    const GraphEnsembleSpec spec{n, row.p, patterns};
    row.moments = engine.moments(n, row.p);
    row.distance = mc_empirical_distance(spec, trials, splitmix64(seed ^ n), options);
    row.bound_t4 = bound_t4(spec, row.moments).value;
    const auto bracket = corollary_t5_bracket(spec, row.moments);
    row.bracket = bracket.value;
    row.out_of_model = bracket.out_of_model;
    result.rows.push_back(std::move(row));
  }
  if (result.rows.size() < 3) {
    result.warnings.push_back("fewer than three values of n; no slope fitted");
    return result;
  }
  std::vector<double> ns;
  std::vector<double> dw;
  std::vector<double> br;
  std::vector<double> bt;
  for (const auto& r : result.rows) {
    ns.push_back(static_cast<double>(r.n));
    dw.push_back(r.distance.dw);
    br.push_back(r.bracket);
    bt.push_back(r.bound_t4);
  }
  result.bracket_fit = log_log_fit(ns, br);
  result.bound_fit = log_log_fit(ns, bt);
  if (std::any_of(dw.begin(), dw.end(), [](double x) { return !(x > 0.0); })) {
    result.warnings.push_back("an empirical distance is zero; no slope fitted");
    return result;
  }
  result.dw_fit = log_log_fit(ns, dw);
  result.fitted = true;
  // Refit on matched bootstrap replicates for a resampling SE of the slope.
  const std::size_t reps = result.rows.front().distance.dw_replicates.size();
  std::vector<double> slopes;
  for (std::size_t b = 0; b < reps; ++b) {
    std::vector<double> y;
    for (const auto& r : result.rows) y.push_back(r.distance.dw_replicates[b]);
    if (std::all_of(y.begin(), y.end(), [](double x) { return x > 0.0; })) slopes.push_back(log_log_fit(ns, y).slope);
  }
  if (slopes.size() > 1) result.dw_slope_bootstrap_se = sample_sd(slopes);
  return result;
}

TailEstimate relative_tail(const GraphEnsembleSpec& spec, std::size_t i, double eps, std::size_t trials,
                           std::uint64_t seed) {
  spec.validate();
  if (i >= spec.patterns.size()) throw ParameterError("relative_tail: pattern index out of range");
  if (!(eps > 0.0)) throw ParameterError("relative_tail: eps must be positive");
  if (trials == 0) throw ParameterError("relative_tail: trials must be at least 1");
  const PatternGraph& h = spec.patterns[i];
  const SubgraphCounter counter({h});
  const MomentSet m = GraphMomentEngine({h}).moments(spec.n, spec.p);
  TailEstimate out;
  out.trials = trials;
  out.lambda = m.lambda[0];
  out.chebyshev = m.variance[0] / (eps * eps * out.lambda * out.lambda);
  RunningStats tail;
  RunningStats positive;
  RunningStats mean;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = substream(seed, t);
    const auto w = static_cast<double>(counter.count(sample_gnp(spec.n, spec.p, rng), 0));
    tail.add(std::abs(w / out.lambda - 1.0) > eps ? 1.0 : 0.0);
    positive.add(w > 0.0 ? 1.0 : 0.0);
    mean.add(w);
  }
  out.frequency = tail.mean();
  out.frequency_stderr = tail.standard_error();
  out.positive_frequency = positive.mean();
  out.mean = mean.mean();
  out.mean_stderr = mean.standard_error();
  return out;
}

}  // namespace mvpois
