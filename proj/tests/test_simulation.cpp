#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "srtm/simulate.hpp"
#include "support/test_models.hpp"

using namespace srtm;

TEST_CASE("noiseless identity model keeps states constant") {
  SrtmModel model;
  model.A = Matrix::Identity(2, 2);
  model.B = Matrix::Zero(2, 0);
  model.C = Matrix::Identity(2, 2);
  model.Q = Matrix::Zero(2, 2);
  model.R = Matrix::Zero(2, 2);
  model.m0 = Vector::Constant(2, 3.0);
  model.P0 = Matrix::Zero(2, 2);
  model.l = 4;

  const Trajectory traj = simulate(model, 3, {}, 5);
  for (const Vector& x : traj.states) {
    CHECK((x - model.m0).norm() == 0.0);
  }
  for (const Vector& y : traj.measurements) {
    CHECK((y - model.C * model.m0).norm() == 0.0);
  }
}

TEST_CASE("l=1 reduces to the standard state-space measurement") {
  SrtmModel model = testing::random_model(3, 2, 2, 0, 1);
  model.R = Matrix::Zero(2, 2); // make y_k = C x_k exactly
  const Trajectory traj = simulate(model, 5, {}, 8);
  for (int k = 1; k <= 5; ++k) {
    CHECK((traj.measurements[k - 1] - model.C * traj.state(k, 1, 1)).norm() == 0.0);
  }
}

TEST_CASE("measurement noise is centered: Monte Carlo residual mean") {
  const SrtmModel model = testing::random_model(13, 2, 1, 0, 3);
  const int n = 10000;
  // One long trajectory gives n i.i.d. residuals y_k - (C/l) sum x.
  const Trajectory traj = simulate(model, n, {}, 17);
  const Matrix c_over_l = model.C / model.l;
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    Vector avg = Vector::Zero(2);
    for (int i = 1; i <= model.l; ++i) avg += traj.state(k, i, model.l);
    sum += (traj.measurements[k - 1] - c_over_l * avg)[0];
  }
  const double mean = sum / n;
  const double sigma = std::sqrt(model.R(0, 0));
  CHECK(std::abs(mean) < 4.0 * sigma / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("identical seeds give bit-identical trajectories") {
  const SrtmModel model = testing::random_model(21, 3, 2, 1, 4);
  const InputSequence inputs = sinusoidal_inputs(model, 6);
  const Trajectory a = simulate(model, 6, inputs, 12345);
  const Trajectory b = simulate(model, 6, inputs, 12345);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    CHECK((a.states[i] - b.states[i]).norm() == 0.0);
  }
  for (std::size_t k = 0; k < a.measurements.size(); ++k) {
    CHECK((a.measurements[k] - b.measurements[k]).norm() == 0.0);
  }
  const Trajectory c = simulate(model, 6, inputs, 54321);
  CHECK((a.states[1] - c.states[1]).norm() > 0.0);
}

TEST_CASE("benchmark_model is stable, well-formed, and seed-deterministic") {
  for (std::uint64_t seed : {0ULL, 1ULL, 2ULL, 3ULL, 4ULL, 10ULL, 99ULL}) {
    const SrtmModel model = benchmark_model(4, 2, 1, 16, seed);
    CHECK(model.state_dim() == 4);
    CHECK(model.meas_dim() == 2);
    CHECK(model.input_dim() == 1);
    CHECK(model.l == 16);
    const Eigen::VectorXcd eig = model.A.eigenvalues();
    CHECK(eig.cwiseAbs().maxCoeff() < 1.0);
    CHECK(is_psd(model.Q));
    CHECK(is_psd(model.P0));
    model.validate();
  }
  const SrtmModel a = benchmark_model(3, 1, 1, 2, 7);
  const SrtmModel b = benchmark_model(3, 1, 1, 2, 7);
  CHECK((a.A - b.A).norm() == 0.0);
  CHECK((a.m0 - b.m0).norm() == 0.0);
}

TEST_CASE("surrogate trajectories stay bounded in mean") {
  const SrtmModel model = benchmark_model(3, 1, 0, 1, 3);
  const Trajectory traj = simulate(model, 1000, {}, 3);
  double max_norm = 0.0;
  double sum_norm = 0.0;
  for (const Vector& x : traj.states) {
    max_norm = std::max(max_norm, x.norm());
    sum_norm += x.norm();
  }
  // Spectral radius 0.95 with modest noise: the running mean stays small.
  CHECK(sum_norm / static_cast<double>(traj.states.size()) < 10.0);
  CHECK(max_norm < 100.0);
}

TEST_CASE("simulate rejects a non-PSD covariance") {
  SrtmModel model = testing::random_model(2, 2, 1, 0, 2);
  model.Q = -Matrix::Identity(2, 2);
  CHECK_THROWS_AS(simulate(model, 2, {}, 0), NumericalError);
}
