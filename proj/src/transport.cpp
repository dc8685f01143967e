#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "mvpois/errors.hpp"
#include "mvpois/lattice_dist.hpp"
#include "mvpois/stats.hpp"

namespace mvpois {

namespace {

constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max() / 4;

// Min-cost transportation with integer costs by successive shortest paths.
// Node potentials keep reduced costs non-negative, so Dijkstra applies on the
// residual graph: forward arcs source->sink are uncapacitated, reverse arcs
// sink->source carry the current flow as capacity.
class TransportSolver {
 public:
  TransportSolver(std::vector<double> supply, std::vector<double> demand, std::vector<std::int32_t> cost)
      : m_(supply.size()),
        n_(demand.size()),
        supply_(std::move(supply)),
        demand_(std::move(demand)),
        cost_(std::move(cost)),
        pot_source_(m_, 0),
        pot_sink_(n_, 0),
        flow_by_sink_(n_) {}

  void solve() {
    while (augment()) {
    }
  }

  const std::vector<std::vector<std::pair<std::size_t, double>>>& flows_by_sink() const { return flow_by_sink_; }

 private:
  std::int64_t cost(std::size_t i, std::size_t j) const { return cost_[i * n_ + j]; }

  double& flow(std::size_t i, std::size_t j) {
    for (auto& [src, f] : flow_by_sink_[j]) {
      if (src == i) return f;
    }
    flow_by_sink_[j].emplace_back(i, 0.0);
    return flow_by_sink_[j].back().second;
  }

  // One shortest augmenting path from any source with supply to the nearest
  // sink with demand. Returns false when no such path exists.
  bool augment() {
    std::vector<std::int64_t> dist(m_ + n_, kUnreached);
    std::vector<std::int64_t> parent(m_ + n_, -1);
    std::vector<char> done(m_ + n_, 0);
    using Entry = std::pair<std::int64_t, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (std::size_t i = 0; i < m_; ++i) {
      if (supply_[i] > 0.0) {
        dist[i] = 0;
        heap.emplace(0, i);
      }
    }
    std::int64_t target = -1;
    while (!heap.empty()) {
      auto [d, node] = heap.top();
      heap.pop();
      if (done[node] || d != dist[node]) continue;
      done[node] = 1;
      if (node < m_) {
        const std::size_t i = node;
        for (std::size_t j = 0; j < n_; ++j) {
          const std::size_t v = m_ + j;
          if (done[v]) continue;
          const std::int64_t nd = d + cost(i, j) + pot_source_[i] - pot_sink_[j];
          if (nd < dist[v]) {
            dist[v] = nd;
            parent[v] = static_cast<std::int64_t>(i);
            heap.emplace(nd, v);
          }
        }
      } else {
        const std::size_t j = node - m_;
        if (demand_[j] > 0.0) {
          target = static_cast<std::int64_t>(j);
          break;
        }
        for (const auto& [i, f] : flow_by_sink_[j]) {
          if (!(f > 0.0) || done[i]) continue;
          const std::int64_t nd = d - cost(i, j) + pot_sink_[j] - pot_source_[i];
          if (nd < dist[i]) {
            dist[i] = nd;
            parent[i] = static_cast<std::int64_t>(node);
            heap.emplace(nd, i);
          }
        }
      }
    }
    if (target < 0) return false;

    const std::int64_t reach = dist[m_ + static_cast<std::size_t>(target)];
    for (std::size_t i = 0; i < m_; ++i) pot_source_[i] += std::min(dist[i], reach);
    for (std::size_t j = 0; j < n_; ++j) pot_sink_[j] += std::min(dist[m_ + j], reach);

    // Bottleneck along the path.
    double amount = demand_[static_cast<std::size_t>(target)];
    std::size_t v = m_ + static_cast<std::size_t>(target);
    while (true) {
      const auto i = static_cast<std::size_t>(parent[v]);
      if (parent[i] < 0) {
        amount = std::min(amount, supply_[i]);
        break;
      }
      const auto sink = static_cast<std::size_t>(parent[i]);
      amount = std::min(amount, flow(i, sink - m_));
      v = sink;
    }
    v = m_ + static_cast<std::size_t>(target);
    demand_[v - m_] -= amount;
    while (true) {
      const auto i = static_cast<std::size_t>(parent[v]);
      flow(i, v - m_) += amount;
      if (parent[i] < 0) {
        supply_[i] -= amount;
        break;
      }
      const auto sink = static_cast<std::size_t>(parent[i]);
      double& back = flow(i, sink - m_);
      back = back - amount;
      if (back < 0.0) back = 0.0;
      v = sink;
    }
    return true;
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<double> supply_;
  std::vector<double> demand_;
  std::vector<std::int32_t> cost_;
  std::vector<std::int64_t> pot_source_;
  std::vector<std::int64_t> pot_sink_;
  std::vector<std::vector<std::pair<std::size_t, double>>> flow_by_sink_;
};

}  // namespace

TransportPlan optimal_transport(const LatticeDistribution& p, const LatticeDistribution& q,
                                const TransportOptions& options) {
  if (p.dimension() != q.dimension()) throw ParameterError("wasserstein_distance: dimension mismatch");
  if (!p.is_probability() || !q.is_probability()) {
    throw ParameterError("wasserstein_distance: both arguments must be probability laws");
  }
  const auto a = p.atoms();
  const auto b = q.atoms();
  if (a.size() * b.size() > options.max_pairs) {
    throw ResourceError("wasserstein_distance: support product " + std::to_string(a.size() * b.size()) +
                        " exceeds the transport cap of " + std::to_string(options.max_pairs) + " atom pairs");
  }

  TransportPlan plan;
  // Mass common to both laws stays in place; with a metric ground cost some
  // optimal plan always does this.
  std::vector<double> supply(a.size());
  std::vector<double> demand(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) supply[i] = a[i].mass;
  for (std::size_t j = 0; j < b.size(); ++j) demand[j] = b[j].mass;
  {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i].point < b[j].point) {
        ++i;
      } else if (b[j].point < a[i].point) {
        ++j;
      } else {
        const double common = std::min(supply[i], demand[j]);
        plan.flows.push_back({i, j, common});
        supply[i] -= common;
        demand[j] -= common;
        ++i;
        ++j;
      }
    }
  }

  std::vector<std::size_t> src;
  std::vector<std::size_t> dst;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (supply[i] > 0.0) src.push_back(i);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (demand[j] > 0.0) dst.push_back(j);
  }

  if (!src.empty() && !dst.empty()) {
    std::vector<double> s(src.size());
    std::vector<double> t(dst.size());
    std::vector<std::int32_t> cost(src.size() * dst.size());
    for (std::size_t u = 0; u < src.size(); ++u) {
      s[u] = supply[src[u]];
      for (std::size_t w = 0; w < dst.size(); ++w) {
        const std::int64_t c = l1_distance(a[src[u]].point, b[dst[w]].point);
        if (c > std::numeric_limits<std::int32_t>::max() / 4) {
          throw ResourceError("wasserstein_distance: ground distances too large");
        }
        cost[u * dst.size() + w] = static_cast<std::int32_t>(c);
      }
    }
    for (std::size_t w = 0; w < dst.size(); ++w) t[w] = demand[dst[w]];

    TransportSolver solver(std::move(s), std::move(t), std::move(cost));
    solver.solve();
    const auto& by_sink = solver.flows_by_sink();
    for (std::size_t w = 0; w < dst.size(); ++w) {
      for (const auto& [u, f] : by_sink[w]) {
        if (f > 0.0) plan.flows.push_back({src[u], dst[w], f});
      }
    }
  }

  CompensatedSum total;
  for (const auto& f : plan.flows) {
    total.add(f.mass * static_cast<double>(l1_distance(a[f.from].point, b[f.to].point)));
  }
  plan.cost = std::max(0.0, total.value());
  return plan;
}

double wasserstein_distance(const LatticeDistribution& p, const LatticeDistribution& q,
                            const TransportOptions& options) {
  return optimal_transport(p, q, options).cost;
}

double wasserstein_1d_oracle(const LatticeDistribution& p, const LatticeDistribution& q) {
  if (p.dimension() != 1 || q.dimension() != 1) {
    throw ParameterError("wasserstein_1d_oracle: both laws must be one-dimensional");
  }
  const auto a = p.atoms();
  const auto b = q.atoms();
  if (a.empty() || b.empty()) return 0.0;
  const std::int64_t lo = std::min(a.front().point[0], b.front().point[0]);
  const std::int64_t hi = std::max(a.back().point[0], b.back().point[0]);
  CompensatedSum fa;
  CompensatedSum fb;
  CompensatedSum total;
  std::size_t i = 0;
  std::size_t j = 0;
  for (std::int64_t t = lo; t < hi; ++t) {
    while (i < a.size() && a[i].point[0] <= t) fa.add(a[i++].mass);
    while (j < b.size() && b[j].point[0] <= t) fb.add(b[j++].mass);
    total.add(std::abs(fa.value() - fb.value()));
  }
  return total.value();
}

PoissonComparison compare_to_poisson(const LatticeDistribution& law, const TruncatedPoissonProduct& target,
                                     const TransportOptions& options) {
  if (law.dimension() != target.lambda.size()) throw ParameterError("compare_to_poisson: dimension mismatch");
  const LatticeDistribution collapsed = target.collapsed();
  PoissonComparison out;
  out.dw = wasserstein_distance(law, collapsed, options);
  out.dw_budget = target.dw_error_budget;
  out.tv = tv_distance(law, collapsed);
  out.tv_budget = target.tail_mass;
  return out;
}

}  // namespace mvpois
