#pragma once

#include <vector>

#include "srtm/model.hpp"
#include "srtm/state.hpp"

namespace srtm {

/// Brute-force ground truth: the exact joint Gaussian over all N*l fast-rate
/// states together with the linear map producing the N integrated
/// measurements. Conditioning is done by dense block Gaussian conditioning,
/// so any filtering or smoothing marginal (and any cross-covariance) can be
/// read off directly. Deliberately simple and O((N l n_x)^3); used to verify
/// the estimators on small instances.
struct JointGaussian {
  Vector mean;      ///< over [x_{1,1}; ...; x_{N,l}], length N*l*n_x
  Matrix cov;
  Matrix meas_map;  ///< (N*n_y) x (N*l*n_x); row block k averages interval k
  Matrix meas_cov;  ///< blkdiag(R, ..., R)
  int n_x = 0;
  int n_y = 0;
  int l = 0;
  int intervals = 0;

  /// Marginal of x_{k,i} (both 1-based).
  GaussianState state_marginal(int k, int i) const;
  /// Joint marginal over interval k, [x_{k,1}; ...; x_{k,l}].
  IntervalPosterior interval_marginal(int k) const;
  /// Cross-covariance between x_{k,i} and x_{k,j}.
  Matrix cross_covariance(int k, int i, int j) const;
};

/// Largest joint state dimension (N * l * n_x) the oracle accepts.
inline constexpr int kOracleMaxDim = 512;

/// Exact joint prior over all fast-rate states of N intervals, built by
/// unrolling the dynamics from x_0 ~ N(m0, P0).
JointGaussian joint_prior(const SrtmModel& model, int n_intervals,
                          const InputSequence& inputs = {});

/// Conditions on measurements y_1..y_upto (pass upto = N for smoothing
/// posteriors). ys holds all N measurements.
JointGaussian condition_on_measurements(const JointGaussian& jg,
                                        const std::vector<Vector>& ys, int upto);

/// Conditions on the single measurement y_k (1-based); repeated application
/// must agree with the all-at-once route.
JointGaussian condition_on_single(const JointGaussian& jg, const Vector& y, int k);

} // namespace srtm
