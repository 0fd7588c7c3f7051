// srtm: simulate, estimate, and benchmark linear-Gaussian state-space models
// with slow-rate integrated (averaged) measurements.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "srtm/bench.hpp"
#include "srtm/io.hpp"
#include "srtm/oracle.hpp"

namespace {

using namespace srtm;

struct SimulateOpts {
  std::string model_path;
  bool synthetic = false;
  int n_x = 4, n_y = 2, n_u = 1, l = 16;
  int n = 100;
  std::uint64_t seed = 0;
  std::string save_model;
  std::string output;
  bool sinusoidal = false;
};

struct EstimateOpts {
  std::string model_path;
  std::string trajectory_path;
  std::string engine = "seq_filter";
  std::string output;
  int workers = 0;
  bool reduced = false;
};

struct BenchOpts {
  std::string model_path;
  int n_x = 4, n_y = 2, n_u = 0, l = 16;
  int n = 0;
  int n_min = 16, n_max = 6000;
  int grid_points = 12;
  int trials = 10;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string output = "timing.csv";
  std::string records;
  bool with_rmse = false;
};

struct VerifyOpts {
  int seeds = 20;
  int workers = 0;
};

int effective_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 2;
}

ModelConfig resolve_model(const std::string& path, bool synthetic, int n_x, int n_y,
                          int n_u, int l, std::uint64_t seed) {
  if (!path.empty() && synthetic) {
    throw ModelError("pass either --model or --synthetic, not both");
  }
  if (!path.empty()) return load_model_config(path);
  if (synthetic) return ModelConfig{benchmark_model(n_x, n_y, n_u, l, seed), {}};
  throw ModelError("a model is required: pass --model <path> or --synthetic");
}

int run_simulate(const SimulateOpts& opt) {
  ModelConfig config = resolve_model(opt.model_path, opt.synthetic, opt.n_x, opt.n_y,
                                     opt.n_u, opt.l, opt.seed);
  if (opt.n < 1) throw ModelError("--n must be at least 1");
  if (opt.sinusoidal) {
    config.inputs = sinusoidal_inputs(config.model, opt.n);
  }
  if (!config.inputs.empty() && config.inputs.intervals() < opt.n) {
    throw ModelError("model config provides inputs for fewer than --n intervals");
  }
  const Trajectory traj = simulate(config.model, opt.n, config.inputs, opt.seed);
  if (!opt.save_model.empty()) {
    save_model_config(opt.save_model, config.model, config.inputs);
  }
  if (opt.output.empty()) throw ModelError("--output is required");
  save_trajectory_csv(opt.output, traj, config.model.state_dim(),
                      config.model.meas_dim(), config.model.l);
  std::cout << "simulated " << opt.n << " intervals (l=" << config.model.l << ", seed="
            << opt.seed << ") -> " << opt.output << "\n";
  return 0;
}

int run_estimate(const EstimateOpts& opt) {
  if (opt.model_path.empty()) throw ModelError("--model is required");
  if (opt.trajectory_path.empty()) throw ModelError("--trajectory is required");
  const ModelConfig config = load_model_config(opt.model_path);
  const Trajectory traj = load_trajectory_csv(opt.trajectory_path, config.model.l);
  const int n = traj.intervals(config.model.l);
  if (n < 1) throw ModelError("trajectory holds no complete interval");
  if (!config.inputs.empty() && config.inputs.intervals() < n) {
    throw ModelError("model config provides inputs for fewer intervals than the trajectory");
  }

  const Engine engine = engine_from_string(opt.engine);
  std::optional<WorkerPool> pool;
  if (engine == Engine::par_filter || engine == Engine::par_smooth) {
    pool.emplace(effective_workers(opt.workers));
  }
  const EstimateRun run =
      run_engine(engine, config.model, traj.measurements, config.inputs,
                 pool ? &*pool : nullptr);

  if (!opt.output.empty()) {
    save_results_csv(opt.output, run.intervals, config.model.state_dim(),
                     config.model.l);
  }
  const double rmse = compute_rmse(run.intervals, traj, config.model.state_dim(),
                                   config.model.l);
  std::cout << "engine=" << to_string(engine) << " intervals=" << n
            << " rmse=" << rmse << "\n";
  return 0;
}

int run_bench(const BenchOpts& opt) {
  ModelConfig config = resolve_model(opt.model_path, opt.model_path.empty(), opt.n_x,
                                     opt.n_y, opt.n_u, opt.l, opt.seed);
  const SrtmModel& model = config.model;
  if (opt.trials < 1) throw ModelError("--trials must be at least 1");

  std::vector<int> grid;
  if (opt.n > 0) {
    grid.push_back(opt.n);
  } else {
    grid = geometric_grid(opt.n_min, opt.n_max, opt.grid_points);
  }

  const int workers = effective_workers(opt.workers);
  WorkerPool pool(workers);
  std::cerr << "bench: n_x=" << model.state_dim() << " n_y=" << model.meas_dim()
            << " l=" << model.l << " trials=" << opt.trials << " workers=" << workers
            << "\n";

  std::vector<RunRecord> records;
  for (const int n : grid) {
    const Trajectory traj =
        simulate(model, n, config.inputs, opt.seed + static_cast<std::uint64_t>(n));
    for (const Engine engine : {Engine::seq_filter, Engine::seq_smooth,
                                Engine::par_filter, Engine::par_smooth}) {
      const bool parallel =
          engine == Engine::par_filter || engine == Engine::par_smooth;
      RunRecord record = time_engine(engine, model, traj.measurements, config.inputs,
                                     parallel ? &pool : nullptr, opt.trials);
      if (opt.with_rmse) {
        const EstimateRun run = run_engine(engine, model, traj.measurements,
                                           config.inputs, parallel ? &pool : nullptr);
        record.rmse = compute_rmse(run.intervals, traj, model.state_dim(), model.l);
      }
      records.push_back(record);
      std::cerr << "  n=" << n << " " << to_string(engine)
                << " mean=" << record.mean_time_s << "s depth=" << record.depth
                << (record.rmse ? " rmse=" + std::to_string(*record.rmse) : "") << "\n";
    }
  }
  save_timing_csv(opt.output, records);
  if (!opt.records.empty()) save_records_csv(opt.records, records);
  std::cout << "wrote " << opt.output << "\n";
  return 0;
}

struct VerifyCheck {
  std::string name;
  double worst = 0.0;
  bool pass = true;
};

int run_verify(const VerifyOpts& opt) {
  const double tol = 1e-8;
  WorkerPool pool(effective_workers(opt.workers));
  bool all_pass = true;

  for (int s = 0; s < opt.seeds; ++s) {
    const std::uint64_t seed = static_cast<std::uint64_t>(s);
    const int l = 1 + static_cast<int>(seed % 5);
    const int n = 1 + static_cast<int>((3 * seed + 1) % 8);
    const SrtmModel model = benchmark_model(1 + static_cast<int>(seed % 3),
                                            1 + static_cast<int>(seed % 2),
                                            static_cast<int>(seed % 2), l, seed);
    InputSequence inputs;
    if (model.input_dim() > 0) inputs = sinusoidal_inputs(model, n);
    const std::vector<Vector> ys =
        simulate(model, n, inputs, seed + 7).measurements;

    const auto slow = imkf_filter(model, ys, inputs);
    const BatchIntervalModel batch = build_batch_model(model);
    const auto fast = fast_rate_filter(model, batch, slow, ys, inputs);
    const auto smoothed = ims_smooth_slow(model, batch, fast, inputs);
    const auto expanded = ims_expand_intervals(model, batch, fast, smoothed, inputs);
    const auto par_filter = parallel_imkf(model, ys, inputs, &pool);
    const ParallelSmootherResult par_smooth = parallel_ims(model, ys, inputs, &pool);

    const JointGaussian prior = joint_prior(model, n, inputs);
    const JointGaussian smooth_post = condition_on_measurements(prior, ys, n);

    double worst = 0.0;
    auto track = [&worst](double err) { worst = std::max(worst, err); };
    for (int k = 1; k <= n; ++k) {
      const JointGaussian filt_post = condition_on_measurements(prior, ys, k);
      const GaussianState slow_ref = filt_post.state_marginal(k, model.l);
      track(relative_error(slow[k - 1].mean, slow_ref.mean));
      track(relative_error(slow[k - 1].cov, slow_ref.cov));
      const IntervalPosterior interval_ref = filt_post.interval_marginal(k);
      track(relative_error(fast[k - 1].mean, interval_ref.mean));
      track(relative_error(fast[k - 1].cov, interval_ref.cov));
      const GaussianState smooth_ref = smooth_post.state_marginal(k, 1);
      track(relative_error(smoothed[k - 1].mean, smooth_ref.mean));
      track(relative_error(smoothed[k - 1].cov, smooth_ref.cov));
      track(relative_error(expanded[k - 1].mean,
                           smooth_post.interval_marginal(k).mean));
      track(relative_error(par_filter[k - 1].mean, slow[k - 1].mean));
      track(relative_error(par_filter[k - 1].cov, slow[k - 1].cov));
      track(relative_error(par_smooth.smoothed_first[k - 1].mean,
                           smoothed[k - 1].mean));
      track(relative_error(par_smooth.smoothed_first[k - 1].cov,
                           smoothed[k - 1].cov));
    }
    const bool pass = worst <= tol;
    all_pass = all_pass && pass;
    std::cout << (pass ? "[pass]" : "[FAIL]") << " seed=" << s << " n_x="
              << model.state_dim() << " l=" << l << " N=" << n
              << " worst_rel_err=" << worst << "\n";
  }
  std::cout << (all_pass ? "verify: all checks passed" : "verify: FAILURES present")
            << "\n";
  return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Filtering and smoothing for state-space models with slow-rate "
               "integrated measurements, sequential and parallel-in-time"};
  app.require_subcommand(1);

  SimulateOpts sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Simulate a trajectory to CSV");
  sim_cmd->add_option("--model", sim.model_path, "Model config JSON");
  sim_cmd->add_flag("--synthetic", sim.synthetic, "Use the seeded surrogate model");
  sim_cmd->add_option("--nx", sim.n_x, "Surrogate state dimension");
  sim_cmd->add_option("--ny", sim.n_y, "Surrogate measurement dimension");
  sim_cmd->add_option("--nu", sim.n_u, "Surrogate input dimension");
  sim_cmd->add_option("--l", sim.l, "Surrogate samples per interval");
  sim_cmd->add_option("--n", sim.n, "Number of measurement intervals");
  sim_cmd->add_option("--seed", sim.seed, "RNG seed");
  sim_cmd->add_flag("--sinusoidal-inputs", sim.sinusoidal,
                    "Drive the model with sinusoidal inputs");
  sim_cmd->add_option("--save-model", sim.save_model,
                      "Write the model (and inputs) used to this JSON path");
  sim_cmd->add_option("--output", sim.output, "Trajectory CSV path")->required();

  EstimateOpts est;
  CLI::App* est_cmd =
      app.add_subcommand("estimate", "Run an estimation engine on a trajectory");
  est_cmd->add_option("--model", est.model_path, "Model config JSON")->required();
  est_cmd->add_option("--trajectory", est.trajectory_path, "Trajectory CSV")->required();
  est_cmd->add_option("--engine", est.engine,
                      "seq_filter | seq_smooth | par_filter | par_smooth");
  est_cmd->add_option("--workers", est.workers, "Worker threads (0 = hardware)");
  est_cmd->add_option("--output", est.output, "Results CSV path");

  BenchOpts bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Time all four engines over a grid of N");
  bench_cmd->add_option("--model", bench.model_path, "Model config JSON (default: surrogate)");
  bench_cmd->add_option("--nx", bench.n_x, "Surrogate state dimension");
  bench_cmd->add_option("--ny", bench.n_y, "Surrogate measurement dimension");
  bench_cmd->add_option("--nu", bench.n_u, "Surrogate input dimension");
  bench_cmd->add_option("--l", bench.l, "Samples per interval (surrogate)");
  bench_cmd->add_option("--n", bench.n, "Single interval count (overrides the grid)");
  bench_cmd->add_option("--n-min", bench.n_min, "Smallest interval count");
  bench_cmd->add_option("--n-max", bench.n_max, "Largest interval count");
  bench_cmd->add_option("--grid-points", bench.grid_points, "Geometric grid size");
  bench_cmd->add_option("--trials", bench.trials, "Timed repetitions per point");
  bench_cmd->add_option("--seed", bench.seed, "RNG seed");
  bench_cmd->add_option("--workers", bench.workers, "Worker threads (0 = hardware)");
  bench_cmd->add_option("--output", bench.output, "Timing CSV path");
  bench_cmd->add_option("--records", bench.records, "Detailed per-record CSV path");
  bench_cmd->add_flag("--rmse", bench.with_rmse, "Also compute RMSE per engine");

  VerifyOpts verify;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Check the estimators against the exact joint-Gaussian reference");
  verify_cmd->add_option("--seeds", verify.seeds, "Number of random models");
  verify_cmd->add_option("--workers", verify.workers, "Worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      return app.exit(e);
    }
    app.exit(e);
    return 2;
  }

  try {
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (est_cmd->parsed()) return run_estimate(est);
    if (bench_cmd->parsed()) return run_bench(bench);
    if (verify_cmd->parsed()) return run_verify(verify);
  } catch (const ModelError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
