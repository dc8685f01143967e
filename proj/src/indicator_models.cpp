#include "mvpois/indicator_models.hpp"

#include <cmath>

#include "mvpois/errors.hpp"
#include "mvpois/stats.hpp"

namespace mvpois {

IndependentBernoulliModel::IndependentBernoulliModel(std::vector<std::vector<double>> p) : p_(std::move(p)) {
  if (p_.empty()) throw ParameterError("independent model: no blocks");
  std::size_t offset = 0;
  for (const auto& block : p_) {
    if (block.empty()) throw ParameterError("independent model: empty block");
    for (double q : block) {
      if (!(q > 0.0 && q < 1.0)) throw ParameterError("independent model: probabilities must lie in (0,1)");
    }
    offsets_.push_back(offset);
    offset += block.size();
  }
}

bool IndependentBernoulliModel::indicator(const ModelState& state, std::size_t i, std::size_t j) const {
  return state[offset(i) + j] != 0;
}

ModelState IndependentBernoulliModel::sample(Rng& rng) const {
  ModelState state(indicator_count(), 0);
  for (std::size_t i = 0; i < p_.size(); ++i) {
    for (std::size_t j = 0; j < p_[i].size(); ++j) state[offset(i) + j] = uniform01(rng) < p_[i][j] ? 1 : 0;
  }
  return state;
}

ModelState IndependentBernoulliModel::couple(const ModelState& state, std::size_t i, std::size_t l, Rng&) const {
  ModelState out = state;
  out[offset(i) + l] = 1;
  return out;
}

void IndependentBernoulliModel::enumerate(const StateVisitor& visit) const {
  const std::size_t total = indicator_count();
  if (total > 24) throw ResourceError("independent model: too many indicators to enumerate");
  ModelState state(total, 0);
  for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
    double prob = 1.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
      for (std::size_t j = 0; j < p_[i].size(); ++j) {
        const bool on = (mask >> (offset(i) + j)) & 1u;
        state[offset(i) + j] = on ? 1 : 0;
        prob *= on ? p_[i][j] : 1.0 - p_[i][j];
      }
    }
    visit(state, prob);
  }
}

void IndependentBernoulliModel::coupled_law(const ModelState& state, std::size_t i, std::size_t l,
                                            const StateVisitor& visit) const {
  ModelState out = state;
  out[offset(i) + l] = 1;
  visit(out, 1.0);
}

bool IndependentBernoulliModel::exchangeable(std::size_t i) const {
  for (double q : p_[i]) {
    if (q != p_[i].front()) return false;
  }
  return true;
}

TablePmfModel::TablePmfModel(std::vector<std::size_t> block_sizes, std::vector<Entry> table)
    : block_sizes_(std::move(block_sizes)), table_(std::move(table)) {
  if (block_sizes_.empty()) throw ParameterError("table model: no blocks");
  for (auto n : block_sizes_) {
    if (n == 0) throw ParameterError("table model: empty block");
    offsets_.push_back(total_);
    total_ += n;
  }
  if (total_ > 24) throw ResourceError("table model: more than 24 indicators");
  CompensatedSum mass;
  marginals_.assign(total_, 0.0);
  for (const auto& e : table_) {
    if (!(e.probability >= 0.0)) throw ParameterError("table model: negative probability");
    if (e.mask >> total_) throw ParameterError("table model: mask uses bits beyond the indicators");
    mass.add(e.probability);
    for (std::size_t b = 0; b < total_; ++b) {
      if ((e.mask >> b) & 1u) marginals_[b] += e.probability;
    }
  }
  if (std::abs(mass.value() - 1.0) > kMassTolerance) throw ParameterError("table model: pmf does not sum to 1");
  for (double m : marginals_) {
    if (!(m > 0.0 && m < 1.0)) throw ParameterError("table model: every marginal must lie in (0,1)");
  }
}

ModelState TablePmfModel::decode(std::uint32_t mask) const {
  ModelState s(total_, 0);
  for (std::size_t b = 0; b < total_; ++b) s[b] = (mask >> b) & 1u;
  return s;
}

bool TablePmfModel::indicator(const ModelState& state, std::size_t i, std::size_t j) const {
  return state[offsets_[i] + j] != 0;
}

ModelState TablePmfModel::sample(Rng& rng) const {
  std::vector<double> w;
  w.reserve(table_.size());
  for (const auto& e : table_) w.push_back(e.probability);
  return decode(table_[std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng)].mask);
}

ModelState TablePmfModel::couple(const ModelState&, std::size_t i, std::size_t l, Rng& rng) const {
  const std::uint32_t bit = 1u << (offsets_[i] + l);
  std::vector<double> w;
  w.reserve(table_.size());
  for (const auto& e : table_) w.push_back((e.mask & bit) ? e.probability : 0.0);
  return decode(table_[std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng)].mask);
}

void TablePmfModel::enumerate(const StateVisitor& visit) const {
  for (const auto& e : table_) visit(decode(e.mask), e.probability);
}

void TablePmfModel::coupled_law(const ModelState&, std::size_t i, std::size_t l, const StateVisitor& visit) const {
  const std::uint32_t bit = 1u << (offsets_[i] + l);
  const double given = marginals_[offsets_[i] + l];
  for (const auto& e : table_) {
    if (e.mask & bit) visit(decode(e.mask), e.probability / given);
  }
}

}  // namespace mvpois
