#pragma once

#include <string>
#include <vector>

#include "srtm/model.hpp"
#include "srtm/simulate.hpp"
#include "srtm/state.hpp"

namespace srtm {

/// A model configuration file: the system matrices plus optional fast-rate
/// inputs.
struct ModelConfig {
  SrtmModel model;
  InputSequence inputs; ///< empty when the file has no "inputs" entry
};

/// Reads a JSON model configuration. Schema (row-major nested arrays):
///   {"A": [[..]], "B": [[..]], "C": [[..]], "Q": [[..]], "R": [[..]],
///    "m0": [..], "P0": [[..]], "l": int,
///    "inputs": [[[..] * l] * (N+1)]}            // optional, u_{k,i}
/// Throws ModelError on malformed content.
ModelConfig load_model_config(const std::string& path);

/// Writes the configuration in the same schema.
void save_model_config(const std::string& path, const SrtmModel& model,
                       const InputSequence& inputs = {});

/// Trajectory CSV: header `k,i,x0..,y0..`; one row per fast-rate state, the
/// prior row first as (k=0, i=l); measurement cells filled only on each
/// interval's last row (i = l), empty otherwise.
void save_trajectory_csv(const std::string& path, const Trajectory& traj, int n_x,
                         int n_y, int l);
Trajectory load_trajectory_csv(const std::string& path, int l);

/// Estimator results CSV: header `k,i,m0..,v0..` with the marginal mean
/// components and marginal variances (covariance diagonal) per fast-rate
/// state.
void save_results_csv(const std::string& path,
                      const std::vector<IntervalPosterior>& intervals, int n_x, int l);

} // namespace srtm
