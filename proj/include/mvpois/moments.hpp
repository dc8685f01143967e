#pragma once

#include <cstddef>
#include <vector>

#include "mvpois/lattice_dist.hpp"

namespace mvpois {

// First and second moments of a count vector W.
struct MomentSet {
  std::vector<double> lambda;
  std::vector<double> variance;
  // Full symmetric d x d matrix; the diagonal repeats `variance`.
  std::vector<std::vector<double>> covariance;

  std::size_t dimension() const { return lambda.size(); }
};

MomentSet moments_of(const LatticeDistribution& law);

}  // namespace mvpois
