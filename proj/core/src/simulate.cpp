#include "srtm/simulate.hpp"

#include <cmath>
#include <numbers>

namespace srtm {

namespace {

// Uniform in (0, 1): top 53 bits of the engine output, nudged away from 0.
double uniform01(std::mt19937_64& engine) {
  const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  return u > 0.0 ? u : 0x1.0p-53;
}

} // namespace

double GaussianSampler::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01(engine_);
  const double u2 = uniform01(engine_);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Vector GaussianSampler::vector(int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = next();
  return v;
}

Trajectory simulate(const SrtmModel& model, int n_intervals, const InputSequence& inputs,
                    std::uint64_t seed) {
  // Sampling only needs PSD covariances (R = 0 is a valid noiseless case);
  // psd_sqrt_factor rejects anything indefinite.
  model.validate_dimensions();
  if (n_intervals < 1) throw ModelError("simulate: need at least one interval");
  const int n_x = model.state_dim();
  const int n_y = model.meas_dim();
  const int l = model.l;

  const Matrix p0_factor = psd_sqrt_factor(model.P0, "prior covariance P0");
  const Matrix q_factor = psd_sqrt_factor(model.Q, "process noise Q");
  const Matrix r_factor = psd_sqrt_factor(model.R, "measurement noise R");

  GaussianSampler rng(seed);
  Trajectory traj;
  traj.seed = seed;
  traj.states.reserve(static_cast<std::size_t>(n_intervals) * l + 1);
  traj.measurements.reserve(n_intervals);

  Vector x = model.m0 + p0_factor * rng.vector(n_x);
  traj.states.push_back(x);
  const Matrix c_over_l = model.C / static_cast<double>(l);
  for (int k = 1; k <= n_intervals; ++k) {
    Vector interval_sum = Vector::Zero(n_x);
    for (int i = 1; i <= l; ++i) {
      Vector u = Vector::Zero(model.input_dim());
      if (!inputs.empty()) {
        u = (i == 1) ? inputs.at(k - 1, l) : inputs.at(k, i - 1);
      }
      x = model.A * x + model.B * u + q_factor * rng.vector(n_x);
      traj.states.push_back(x);
      interval_sum += x;
    }
    traj.measurements.push_back(c_over_l * interval_sum + r_factor * rng.vector(n_y));
  }
  return traj;
}

SrtmModel benchmark_model(int n_x, int n_y, int n_u, int l, std::uint64_t seed) {
  if (n_x < 1 || n_y < 1 || n_u < 0 || l < 1) {
    throw ModelError("benchmark_model: invalid dimensions");
  }
  // Offset keeps the model draw decoupled from trajectory seeds.
  GaussianSampler rng(seed * 0x9e3779b97f4a7c15ULL + 0x5851f42d4c957f2dULL);

  auto random_matrix = [&](int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = rng.next();
    return m;
  };

  SrtmModel model;
  // Contraction by 0.95 of a random orthogonal matrix: every singular value
  // (hence the spectral radius) is exactly 0.95.
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n_x, n_x));
  Matrix q_orth = qr.householderQ() * Matrix::Identity(n_x, n_x);
  model.A = 0.95 * q_orth;
  model.B = 0.3 * random_matrix(n_x, n_u);
  model.C = random_matrix(n_y, n_x);
  const Matrix wq = random_matrix(n_x, n_x);
  model.Q = symmetrize(0.1 * wq * wq.transpose()) + 0.01 * Matrix::Identity(n_x, n_x);
  const Matrix wr = random_matrix(n_y, n_y);
  model.R = symmetrize(0.1 * wr * wr.transpose()) + 0.05 * Matrix::Identity(n_y, n_y);
  model.m0 = rng.vector(n_x);
  const Matrix wp = random_matrix(n_x, n_x);
  model.P0 = symmetrize(0.5 * wp * wp.transpose()) + 0.1 * Matrix::Identity(n_x, n_x);
  model.l = l;
  model.validate();
  return model;
}

InputSequence sinusoidal_inputs(const SrtmModel& model, int n_intervals, double amplitude) {
  InputSequence inputs(n_intervals, model.l, model.input_dim());
  for (int k = 0; k <= n_intervals; ++k) {
    for (int i = 1; i <= model.l; ++i) {
      const double t = static_cast<double>(k) * model.l + i;
      for (int c = 0; c < model.input_dim(); ++c) {
        inputs.at(k, i)[c] = amplitude * std::sin(0.05 * t + c);
      }
    }
  }
  return inputs;
}

} // namespace srtm
