#pragma once

#include <cstdint>
#include <vector>

#include "srtm/model.hpp"
#include "srtm/simulate.hpp"

namespace srtm::testing {

/// Random valid model drawn from the seeded surrogate generator.
inline SrtmModel random_model(std::uint64_t seed, int n_x, int n_y, int n_u, int l) {
  return benchmark_model(n_x, n_y, n_u, l, seed);
}

/// Random model with dimensions drawn from the seed (n_x <= 4, n_y <= 2,
/// n_u <= 2) and the given interval length.
inline SrtmModel random_model_any_dims(std::uint64_t seed, int l) {
  const int n_x = 1 + static_cast<int>(seed % 4);
  const int n_y = 1 + static_cast<int>((seed / 4) % 2);
  const int n_u = static_cast<int>((seed / 8) % 3);
  return benchmark_model(n_x, n_y, n_u, l, seed);
}

/// Measurements from a seeded simulation of the model.
inline std::vector<Vector> simulated_measurements(const SrtmModel& model, int n,
                                                  const InputSequence& inputs,
                                                  std::uint64_t seed) {
  return simulate(model, n, inputs, seed).measurements;
}

inline double rel_err(const Matrix& x, const Matrix& ref) {
  return relative_error(x, ref);
}

inline double rel_err(const Vector& x, const Vector& ref) {
  return (x - ref).norm() / std::max(1.0, ref.norm());
}

} // namespace srtm::testing
