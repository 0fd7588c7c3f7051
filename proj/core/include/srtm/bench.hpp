#pragma once

#include <optional>
#include <string>
#include <vector>

#include "srtm/elements.hpp"
#include "srtm/simulate.hpp"

namespace srtm {

enum class Engine { seq_filter, seq_smooth, par_filter, par_smooth };

const char* to_string(Engine engine);
Engine engine_from_string(const std::string& name);

/// One bench grid point. For the parallel engines depth/combine_count come
/// from the scan instrumentation (both scans summed for the smoother); for
/// the sequential engines depth = N (the length of the sequential dependency
/// chain) and combine_count = N (one update per step).
struct RunRecord {
  int n_intervals = 0;
  Engine engine = Engine::seq_filter;
  double mean_time_s = 0.0;
  double std_time_s = 0.0;
  double median_time_s = 0.0;
  int trials = 0;
  std::int64_t depth = 0;
  std::int64_t combine_count = 0;
  std::optional<double> rmse;
};

/// Fast-rate mean estimates per state, flattened over (k, i); what the RMSE
/// is computed against.
struct EstimateRun {
  std::vector<IntervalPosterior> intervals;
  ScanStats filter_scan;  ///< parallel engines only
  ScanStats smoother_scan;///< parallel smoother only
};

/// Runs one engine end to end on the given data, returning the fast-rate
/// posteriors (filtered for the filter engines, smoothed for the smoothers).
EstimateRun run_engine(Engine engine, const SrtmModel& model,
                       const std::vector<Vector>& ys, const InputSequence& inputs,
                       WorkerPool* pool);

/// Root-mean-square error over all fast-rate states and components.
/// Throws ModelError when lengths disagree.
double compute_rmse(const std::vector<IntervalPosterior>& estimates,
                    const Trajectory& truth, int n_x, int l);

/// Times one engine: one discarded warm-up run, then `trials` timed runs.
RunRecord time_engine(Engine engine, const SrtmModel& model,
                      const std::vector<Vector>& ys, const InputSequence& inputs,
                      WorkerPool* pool, int trials);

/// Geometric grid of `points` interval counts from n_min to n_max inclusive
/// (deduplicated after rounding).
std::vector<int> geometric_grid(int n_min, int n_max, int points);

/// Figure-style timing CSV with exactly the columns
/// lengths_space, gpu_par_filter_mean_times, gpu_par_smooth_mean_times,
/// gpu_seq_filter_mean_times, gpu_seq_smooth_mean_times.
void save_timing_csv(const std::string& path, const std::vector<RunRecord>& records);

/// Full per-record CSV (mean/std/median, trials, depth, work, rmse).
void save_records_csv(const std::string& path, const std::vector<RunRecord>& records);

} // namespace srtm
