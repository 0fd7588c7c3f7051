#pragma once

#include "srtm/linalg.hpp"

namespace srtm {

/// A Gaussian belief over one state vector.
struct GaussianState {
  Vector mean;
  Matrix cov;
};

/// A joint Gaussian belief over all l states of one interval, ordered
/// [x_{k,1}; ...; x_{k,l}]. Block (i, j) of cov is the cross-covariance
/// between x_{k,i} and x_{k,j}.
struct IntervalPosterior {
  Vector mean;
  Matrix cov;

  int state_dim(int l) const { return static_cast<int>(mean.size()) / l; }

  /// Mean of x_{k,i} (i is 1-based).
  Vector mean_block(int i, int n_x) const { return mean.segment((i - 1) * n_x, n_x); }

  /// Cross-covariance block between x_{k,i} and x_{k,j} (1-based).
  Matrix cov_block(int i, int j, int n_x) const {
    return cov.block((i - 1) * n_x, (j - 1) * n_x, n_x, n_x);
  }

  /// Marginal of x_{k,i}.
  GaussianState marginal(int i, int n_x) const {
    return GaussianState{mean_block(i, n_x), cov_block(i, i, n_x)};
  }
};

} // namespace srtm
