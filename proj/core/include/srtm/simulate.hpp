#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "srtm/model.hpp"

namespace srtm {

/// A simulated ground-truth run: fast-rate states (x_0 first, then the N*l
/// interval states) and the N integrated measurements.
struct Trajectory {
  std::vector<Vector> states;       ///< size N*l + 1; states[0] = x_0
  std::vector<Vector> measurements; ///< size N
  std::uint64_t seed = 0;

  int intervals(int l) const {
    return static_cast<int>(states.size() - 1) / l;
  }
  /// x_{k,i} (1-based interval and in-interval index).
  const Vector& state(int k, int i, int l) const {
    return states[static_cast<std::size_t>(k - 1) * l + i];
  }
};

/// Standard normal draws from an explicitly seeded mt19937_64 via the
/// Box-Muller transform, so trajectories are reproducible across platforms
/// (std::normal_distribution is implementation-defined).
class GaussianSampler {
public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}
  double next();
  Vector vector(int n);

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Samples x_0 ~ N(m0, P0), propagates the fast-rate dynamics with i.i.d.
/// N(0, Q) noise, and emits y_k as the noisy C/l-average of each interval's
/// states. Bit-identical output for a fixed seed.
Trajectory simulate(const SrtmModel& model, int n_intervals,
                    const InputSequence& inputs = {}, std::uint64_t seed = 0);

/// Documented surrogate benchmark model: A is a seeded random orthogonal
/// matrix scaled by 0.95 (spectral radius 0.95 by construction), Q and P0
/// random PSD, R random PD, all drawn deterministically from the seed.
SrtmModel benchmark_model(int n_x, int n_y, int n_u, int l, std::uint64_t seed = 0);

/// Sinusoidal fast-rate inputs for exercising the B-paths:
/// u_{k,i}[c] = amplitude * sin(0.05 * t + c) with t the global slot index.
InputSequence sinusoidal_inputs(const SrtmModel& model, int n_intervals,
                                double amplitude = 1.0);

} // namespace srtm
