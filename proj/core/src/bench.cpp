#include "srtm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>

namespace srtm {

const char* to_string(Engine engine) {
  switch (engine) {
    case Engine::seq_filter: return "seq_filter";
    case Engine::seq_smooth: return "seq_smooth";
    case Engine::par_filter: return "par_filter";
    case Engine::par_smooth: return "par_smooth";
  }
  return "unknown";
}

Engine engine_from_string(const std::string& name) {
  if (name == "seq_filter") return Engine::seq_filter;
  if (name == "seq_smooth") return Engine::seq_smooth;
  if (name == "par_filter") return Engine::par_filter;
  if (name == "par_smooth") return Engine::par_smooth;
  throw ModelError("unknown engine '" + name +
                   "' (expected seq_filter, seq_smooth, par_filter, par_smooth)");
}

EstimateRun run_engine(Engine engine, const SrtmModel& model,
                       const std::vector<Vector>& ys, const InputSequence& inputs,
                       WorkerPool* pool) {
  EstimateRun run;
  const BatchIntervalModel batch = build_batch_model(model);
  switch (engine) {
    case Engine::seq_filter: {
      const std::vector<GaussianState> slow = imkf_filter(model, ys, inputs);
      run.intervals = fast_rate_filter(model, batch, slow, ys, inputs);
      break;
    }
    case Engine::seq_smooth: {
      const std::vector<GaussianState> slow = imkf_filter(model, ys, inputs);
      const std::vector<IntervalPosterior> fast =
          fast_rate_filter(model, batch, slow, ys, inputs);
      const std::vector<GaussianState> smoothed =
          ims_smooth_slow(model, batch, fast, inputs);
      run.intervals = ims_expand_intervals(model, batch, fast, smoothed, inputs);
      break;
    }
    case Engine::par_filter: {
      const std::vector<GaussianState> slow =
          parallel_imkf(model, ys, inputs, pool, &run.filter_scan);
      run.intervals = fast_rate_filter(model, batch, slow, ys, inputs, pool);
      break;
    }
    case Engine::par_smooth: {
      ParallelSmootherResult result = parallel_ims(model, ys, inputs, pool);
      run.intervals = std::move(result.smoothed_intervals);
      run.filter_scan = result.filter_scan;
      run.smoother_scan = result.smoother_scan;
      break;
    }
  }
  return run;
}

double compute_rmse(const std::vector<IntervalPosterior>& estimates,
                    const Trajectory& truth, int n_x, int l) {
  const std::size_t n = estimates.size();
  if (truth.states.size() != n * l + 1) {
    throw ModelError("compute_rmse: estimate/truth length mismatch");
  }
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    for (int i = 1; i <= l; ++i) {
      const Vector err = estimates[k - 1].mean_block(i, n_x) -
                         truth.state(static_cast<int>(k), i, l);
      sum_sq += err.squaredNorm();
      count += n_x;
    }
  }
  return std::sqrt(sum_sq / static_cast<double>(count));
}

RunRecord time_engine(Engine engine, const SrtmModel& model,
                      const std::vector<Vector>& ys, const InputSequence& inputs,
                      WorkerPool* pool, int trials) {
  if (trials < 1) throw ModelError("time_engine: trials must be >= 1");
  using clock = std::chrono::steady_clock;

  RunRecord record;
  record.n_intervals = static_cast<int>(ys.size());
  record.engine = engine;
  record.trials = trials;

  EstimateRun warm = run_engine(engine, model, ys, inputs, pool); // discarded
  if (engine == Engine::par_filter || engine == Engine::par_smooth) {
    record.depth = warm.filter_scan.depth + warm.smoother_scan.depth;
    record.combine_count = warm.filter_scan.combine_count + warm.smoother_scan.combine_count;
  } else {
    record.depth = record.n_intervals;
    record.combine_count = record.n_intervals;
  }

  std::vector<double> times(trials);
  for (int t = 0; t < trials; ++t) {
    const auto begin = clock::now();
    EstimateRun run = run_engine(engine, model, ys, inputs, pool);
    const auto end = clock::now();
    times[t] = std::chrono::duration<double>(end - begin).count();
  }
  const double mean = std::accumulate(times.begin(), times.end(), 0.0) / trials;
  double var = 0.0;
  for (double t : times) var += (t - mean) * (t - mean);
  var = trials > 1 ? var / (trials - 1) : 0.0;
  std::sort(times.begin(), times.end());
  record.mean_time_s = mean;
  record.std_time_s = std::sqrt(var);
  record.median_time_s = times[trials / 2];
  return record;
}

std::vector<int> geometric_grid(int n_min, int n_max, int points) {
  if (n_min < 1 || n_max < n_min || points < 1) {
    throw ModelError("geometric_grid: invalid range");
  }
  std::vector<int> grid;
  if (points == 1 || n_min == n_max) {
    grid.push_back(n_min);
    if (n_max != n_min) grid.push_back(n_max);
    return grid;
  }
  const double ratio = std::pow(static_cast<double>(n_max) / n_min,
                                1.0 / (points - 1));
  for (int p = 0; p < points; ++p) {
    const int n = static_cast<int>(std::lround(n_min * std::pow(ratio, p)));
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  if (grid.back() != n_max) grid.push_back(n_max);
  return grid;
}

namespace {

void write_double(std::ostream& os, double v) {
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
}

} // namespace

void save_timing_csv(const std::string& path, const std::vector<RunRecord>& records) {
  // Column names retained for compatibility with existing plotting scripts.
  std::map<int, std::map<Engine, double>> by_n;
  for (const RunRecord& r : records) by_n[r.n_intervals][r.engine] = r.mean_time_s;

  std::ofstream out(path);
  if (!out) throw ModelError("cannot write timing CSV '" + path + "'");
  out << "lengths_space,gpu_par_filter_mean_times,gpu_par_smooth_mean_times,"
         "gpu_seq_filter_mean_times,gpu_seq_smooth_mean_times\n";
  for (const auto& [n, engines] : by_n) {
    out << n;
    for (Engine e : {Engine::par_filter, Engine::par_smooth, Engine::seq_filter,
                     Engine::seq_smooth}) {
      out << ",";
      auto it = engines.find(e);
      if (it != engines.end()) write_double(out, it->second);
    }
    out << "\n";
  }
}

void save_records_csv(const std::string& path, const std::vector<RunRecord>& records) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write records CSV '" + path + "'");
  out << "n_intervals,engine,mean_time_s,std_time_s,median_time_s,trials,depth,"
         "combine_count,rmse\n";
  for (const RunRecord& r : records) {
    out << r.n_intervals << "," << to_string(r.engine) << ",";
    write_double(out, r.mean_time_s);
    out << ",";
    write_double(out, r.std_time_s);
    out << ",";
    write_double(out, r.median_time_s);
    out << "," << r.trials << "," << r.depth << "," << r.combine_count << ",";
    if (r.rmse) write_double(out, *r.rmse);
    out << "\n";
  }
}

} // namespace srtm
