#include "srtm/model.hpp"

#include <Eigen/Cholesky>

#include <string>

namespace srtm {

void SrtmModel::validate_dimensions() const {
  const int n_x = state_dim();
  const int n_y = meas_dim();
  if (n_x < 1) throw ModelError("state dimension must be >= 1");
  if (A.rows() != A.cols()) throw ModelError("A must be square");
  if (B.rows() != n_x) throw ModelError("B row count must match A");
  if (C.cols() != n_x) throw ModelError("C column count must match A");
  if (n_y < 1) throw ModelError("measurement dimension must be >= 1");
  if (Q.rows() != n_x || Q.cols() != n_x) throw ModelError("Q must be n_x x n_x");
  if (R.rows() != n_y || R.cols() != n_y) throw ModelError("R must be n_y x n_y");
  if (m0.size() != n_x) throw ModelError("m0 must have length n_x");
  if (P0.rows() != n_x || P0.cols() != n_x) throw ModelError("P0 must be n_x x n_x");
  if (l < 1) throw ModelError("l must be >= 1");
}

void SrtmModel::validate() const {
  validate_dimensions();
  if (!is_symmetric(Q, 1e-9)) throw ModelError("Q must be symmetric");
  if (!is_symmetric(R, 1e-9)) throw ModelError("R must be symmetric");
  if (!is_symmetric(P0, 1e-9)) throw ModelError("P0 must be symmetric");
  if (!is_psd(Q)) throw ModelError("Q must be positive semidefinite");
  if (!is_psd(P0)) throw ModelError("P0 must be positive semidefinite");
  Eigen::LLT<Matrix> llt(symmetrize(R));
  if (llt.info() != Eigen::Success) {
    throw ModelError("R must be positive definite");
  }
}

InputSequence::InputSequence(int n_intervals, int l, int n_u)
    : n_intervals_(n_intervals), l_(l), n_u_(n_u) {
  if (n_intervals < 0 || l < 1 || n_u < 0) {
    throw ModelError("invalid input-sequence dimensions");
  }
  slots_.assign(static_cast<std::size_t>(n_intervals + 1) * l, Vector::Zero(n_u));
}

const Vector& InputSequence::at(int k, int i) const {
  if (k < 0 || k > n_intervals_ || i < 1 || i > l_) {
    throw ModelError("input index (" + std::to_string(k) + ", " + std::to_string(i) +
                     ") out of range");
  }
  return slots_[static_cast<std::size_t>(k) * l_ + (i - 1)];
}

Vector& InputSequence::at(int k, int i) {
  return const_cast<Vector&>(std::as_const(*this).at(k, i));
}

LiftedSlowModel lift_slow_model(const SrtmModel& model) {
  model.validate();
  const int n_x = model.state_dim();
  const int n_u = model.input_dim();
  const int n_y = model.meas_dim();
  const int l = model.l;

  const std::vector<Matrix> pow = matrix_power_prefixes(model.A, l);
  // power_sum[j] = sum_{i=0..j} A^i
  std::vector<Matrix> power_sum(static_cast<std::size_t>(l) + 1);
  power_sum[0] = Matrix::Identity(n_x, n_x);
  for (int j = 1; j <= l; ++j) power_sum[j] = power_sum[j - 1] + pow[j];

  LiftedSlowModel lifted;
  lifted.Abar = pow[l];
  lifted.Gbar.resize(n_x, l * n_x);
  lifted.Bbar.resize(n_x, l * n_u);
  lifted.Mbar.resize(n_y, l * n_x);
  lifted.Dbar.resize(n_y, l * n_u);
  const Matrix c_over_l = model.C / static_cast<double>(l);
  for (int j = 0; j < l; ++j) {
    // Block j corresponds to the (j+1)-th noise/input slot of the interval.
    lifted.Gbar.middleCols(j * n_x, n_x) = pow[l - 1 - j];
    lifted.Bbar.middleCols(j * n_u, n_u) = pow[l - 1 - j] * model.B;
    lifted.Mbar.middleCols(j * n_x, n_x) = c_over_l * power_sum[l - 1 - j];
    lifted.Dbar.middleCols(j * n_u, n_u) = c_over_l * power_sum[l - 1 - j] * model.B;
  }
  lifted.Qtilde = Matrix::Zero(l * n_x, l * n_x);
  for (int j = 0; j < l; ++j) {
    lifted.Qtilde.block(j * n_x, j * n_x, n_x, n_x) = model.Q;
  }
  lifted.Qbar = symmetrize(lifted.Gbar * lifted.Qtilde * lifted.Gbar.transpose());
  lifted.Cbar = c_over_l * (power_sum[l] - Matrix::Identity(n_x, n_x));
  lifted.Rx = symmetrize(lifted.Mbar * lifted.Qtilde * lifted.Mbar.transpose() + model.R);

  Eigen::LLT<Matrix> llt(lifted.Rx);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("lifted measurement covariance Rx is not positive definite");
  }
  return lifted;
}

BatchIntervalModel build_batch_model(const SrtmModel& model) {
  model.validate();
  const int n_x = model.state_dim();
  const int n_u = model.input_dim();
  const int n_y = model.meas_dim();
  const int l = model.l;

  const std::vector<Matrix> pow = matrix_power_prefixes(model.A, l);

  BatchIntervalModel batch;
  batch.calA.resize(l * n_x, n_x);
  batch.calG = Matrix::Zero(l * n_x, l * n_x);
  batch.calB = Matrix::Zero(l * n_x, l * n_u);
  for (int i = 1; i <= l; ++i) {
    batch.calA.middleRows((i - 1) * n_x, n_x) = pow[i];
    for (int j = 1; j <= i; ++j) {
      batch.calG.block((i - 1) * n_x, (j - 1) * n_x, n_x, n_x) = pow[i - j];
      batch.calB.block((i - 1) * n_x, (j - 1) * n_u, n_x, n_u) = pow[i - j] * model.B;
    }
  }
  batch.H.resize(n_y, l * n_x);
  const Matrix c_over_l = model.C / static_cast<double>(l);
  for (int j = 0; j < l; ++j) {
    batch.H.middleCols(j * n_x, n_x) = c_over_l;
  }
  batch.Ahat = Matrix::Zero(n_x, l * n_x);
  batch.Ahat.rightCols(n_x) = model.A;
  return batch;
}

Vector stack_inputs(const SrtmModel& model, const InputSequence& inputs, int k) {
  const int n_u = model.input_dim();
  const int l = model.l;
  if (inputs.empty()) {
    return Vector::Zero(l * n_u);
  }
  if (inputs.input_dim() != n_u || inputs.samples_per_interval() != l) {
    throw ModelError("input sequence does not match model dimensions");
  }
  Vector ubar(l * n_u);
  ubar.segment(0, n_u) = inputs.at(k - 1, l);
  for (int i = 1; i < l; ++i) {
    ubar.segment(i * n_u, n_u) = inputs.at(k, i);
  }
  return ubar;
}

Vector last_interval_input(const SrtmModel& model, const InputSequence& inputs, int k) {
  if (inputs.empty()) {
    return Vector::Zero(model.input_dim());
  }
  return inputs.at(k, model.l);
}

} // namespace srtm
