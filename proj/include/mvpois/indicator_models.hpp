#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mvpois/size_biased.hpp"

namespace mvpois {

// Independent Bernoulli indicators; the coupling sets X^i_l = 1 and leaves
// every other indicator untouched, so it is increasing.
class IndependentBernoulliModel final : public IndicatorSumModel {
 public:
  explicit IndependentBernoulliModel(std::vector<std::vector<double>> p);

  std::size_t dimension() const override { return p_.size(); }
  std::size_t block_size(std::size_t i) const override { return p_[i].size(); }
  double marginal(std::size_t i, std::size_t j) const override { return p_[i][j]; }
  bool indicator(const ModelState& state, std::size_t i, std::size_t j) const override;
  ModelState sample(Rng& rng) const override;
  ModelState couple(const ModelState& state, std::size_t i, std::size_t l, Rng& rng) const override;

  bool supports_exhaustive() const override { return true; }
  void enumerate(const StateVisitor& visit) const override;
  void coupled_law(const ModelState& state, std::size_t i, std::size_t l, const StateVisitor& visit) const override;
  bool exchangeable(std::size_t i) const override;

 private:
  std::size_t offset(std::size_t i) const { return offsets_[i]; }

  std::vector<std::vector<double>> p_;
  std::vector<std::size_t> offsets_;
};

// Arbitrary joint law of indicators given as a table over bit masks (bit
// offset(i) + j is X^i_j). The coupling redraws every indicator from the
// conditional table given X^i_l = 1, independently of the base draw.
class TablePmfModel final : public IndicatorSumModel {
 public:
  struct Entry {
    std::uint32_t mask = 0;
    double probability = 0.0;
  };

  TablePmfModel(std::vector<std::size_t> block_sizes, std::vector<Entry> table);

  std::size_t dimension() const override { return block_sizes_.size(); }
  std::size_t block_size(std::size_t i) const override { return block_sizes_[i]; }
  double marginal(std::size_t i, std::size_t j) const override { return marginals_[offsets_[i] + j]; }
  bool indicator(const ModelState& state, std::size_t i, std::size_t j) const override;
  ModelState sample(Rng& rng) const override;
  ModelState couple(const ModelState& state, std::size_t i, std::size_t l, Rng& rng) const override;

  bool supports_exhaustive() const override { return true; }
  void enumerate(const StateVisitor& visit) const override;
  void coupled_law(const ModelState& state, std::size_t i, std::size_t l, const StateVisitor& visit) const override;

 private:
  ModelState decode(std::uint32_t mask) const;

  std::vector<std::size_t> block_sizes_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
  std::vector<Entry> table_;
  std::vector<double> marginals_;
};

}  // namespace mvpois
