#include "srtm/oracle.hpp"

#include <string>

namespace srtm {

namespace {

void check_block_index(const JointGaussian& jg, int k, int i) {
  if (k < 1 || k > jg.intervals || i < 1 || i > jg.l) {
    throw ModelError("oracle: state index (" + std::to_string(k) + ", " +
                     std::to_string(i) + ") out of range");
  }
}

// Conditions (mean, cov) on rows [r0, r0+rows) of the measurement map.
JointGaussian condition_rows(const JointGaussian& jg, const Vector& y_stacked,
                             int r0, int rows) {
  const Matrix h = jg.meas_map.middleRows(r0, rows);
  const Matrix r = jg.meas_cov.block(r0, r0, rows, rows);
  const Matrix cross = jg.cov * h.transpose();
  const Matrix s = symmetrize(h * cross + r);
  // gain = cross * s^{-1}
  const Matrix gain = solve_spd(s, cross.transpose(), "oracle innovation covariance")
                          .transpose();
  JointGaussian post = jg;
  post.mean = jg.mean + gain * (y_stacked - h * jg.mean);
  post.cov = symmetrize(jg.cov - gain * cross.transpose());
  return post;
}

} // namespace

GaussianState JointGaussian::state_marginal(int k, int i) const {
  check_block_index(*this, k, i);
  const int off = ((k - 1) * l + (i - 1)) * n_x;
  return GaussianState{mean.segment(off, n_x), cov.block(off, off, n_x, n_x)};
}

IntervalPosterior JointGaussian::interval_marginal(int k) const {
  check_block_index(*this, k, 1);
  const int off = (k - 1) * l * n_x;
  const int dim = l * n_x;
  return IntervalPosterior{mean.segment(off, dim), cov.block(off, off, dim, dim)};
}

Matrix JointGaussian::cross_covariance(int k, int i, int j) const {
  check_block_index(*this, k, i);
  check_block_index(*this, k, j);
  const int ri = ((k - 1) * l + (i - 1)) * n_x;
  const int cj = ((k - 1) * l + (j - 1)) * n_x;
  return cov.block(ri, cj, n_x, n_x);
}

JointGaussian joint_prior(const SrtmModel& model, int n_intervals,
                          const InputSequence& inputs) {
  model.validate();
  if (n_intervals < 1) throw ModelError("oracle: need at least one interval");
  const int n_x = model.state_dim();
  const int n_y = model.meas_dim();
  const int l = model.l;
  const int steps = n_intervals * l;
  if (steps * n_x > kOracleMaxDim) {
    throw ModelError("oracle: joint dimension " + std::to_string(steps * n_x) +
                     " exceeds cap " + std::to_string(kOracleMaxDim));
  }

  // Unroll over x_0..x_T, then drop the x_0 block.
  const int total = steps + 1;
  Matrix cov = Matrix::Zero(total * n_x, total * n_x);
  Vector mean(total * n_x);
  mean.segment(0, n_x) = model.m0;
  cov.block(0, 0, n_x, n_x) = model.P0;
  for (int t = 1; t <= steps; ++t) {
    // Input slot driving x_{t-1} -> x_t: (k, i-1) with (k, 0) = (k-1, l).
    const int k = (t - 1) / l + 1;
    const int i = (t - 1) % l + 1;
    Vector u = Vector::Zero(model.input_dim());
    if (!inputs.empty()) {
      u = (i == 1) ? inputs.at(k - 1, l) : inputs.at(k, i - 1);
    }
    mean.segment(t * n_x, n_x) = model.A * mean.segment((t - 1) * n_x, n_x) + model.B * u;
    cov.block(t * n_x, t * n_x, n_x, n_x) =
        model.A * cov.block((t - 1) * n_x, (t - 1) * n_x, n_x, n_x) * model.A.transpose() +
        model.Q;
    for (int s = 0; s < t; ++s) {
      cov.block(s * n_x, t * n_x, n_x, n_x) =
          cov.block(s * n_x, (t - 1) * n_x, n_x, n_x) * model.A.transpose();
      cov.block(t * n_x, s * n_x, n_x, n_x) =
          cov.block(s * n_x, t * n_x, n_x, n_x).transpose();
    }
  }

  JointGaussian jg;
  jg.n_x = n_x;
  jg.n_y = n_y;
  jg.l = l;
  jg.intervals = n_intervals;
  jg.mean = mean.segment(n_x, steps * n_x);
  jg.cov = symmetrize(cov.block(n_x, n_x, steps * n_x, steps * n_x));
  jg.meas_map = Matrix::Zero(n_intervals * n_y, steps * n_x);
  const Matrix c_over_l = model.C / static_cast<double>(l);
  for (int k = 1; k <= n_intervals; ++k) {
    for (int i = 1; i <= l; ++i) {
      jg.meas_map.block((k - 1) * n_y, ((k - 1) * l + (i - 1)) * n_x, n_y, n_x) = c_over_l;
    }
  }
  jg.meas_cov = Matrix::Zero(n_intervals * n_y, n_intervals * n_y);
  for (int k = 0; k < n_intervals; ++k) {
    jg.meas_cov.block(k * n_y, k * n_y, n_y, n_y) = model.R;
  }
  return jg;
}

JointGaussian condition_on_measurements(const JointGaussian& jg,
                                        const std::vector<Vector>& ys, int upto) {
  if (upto < 1 || upto > jg.intervals || static_cast<int>(ys.size()) < upto) {
    throw ModelError("oracle: conditioning range out of bounds");
  }
  Vector y_stacked(upto * jg.n_y);
  for (int k = 0; k < upto; ++k) {
    if (ys[k].size() != jg.n_y) throw ModelError("oracle: measurement dimension mismatch");
    y_stacked.segment(k * jg.n_y, jg.n_y) = ys[k];
  }
  return condition_rows(jg, y_stacked, 0, upto * jg.n_y);
}

JointGaussian condition_on_single(const JointGaussian& jg, const Vector& y, int k) {
  if (k < 1 || k > jg.intervals) throw ModelError("oracle: measurement index out of range");
  if (y.size() != jg.n_y) throw ModelError("oracle: measurement dimension mismatch");
  return condition_rows(jg, y, (k - 1) * jg.n_y, jg.n_y);
}

} // namespace srtm
