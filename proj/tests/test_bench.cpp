#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "srtm/bench.hpp"
#include "support/test_models.hpp"

using namespace srtm;

TEST_CASE("compute_rmse of the truth itself is zero") {
  const SrtmModel model = testing::random_model(1, 2, 1, 0, 3);
  const Trajectory traj = simulate(model, 4, {}, 3);
  std::vector<IntervalPosterior> exact(4);
  for (int k = 1; k <= 4; ++k) {
    exact[k - 1].mean.resize(3 * 2);
    for (int i = 1; i <= 3; ++i) {
      exact[k - 1].mean.segment((i - 1) * 2, 2) = traj.state(k, i, 3);
    }
    exact[k - 1].cov = Matrix::Zero(6, 6);
  }
  CHECK(compute_rmse(exact, traj, 2, 3) == 0.0);
}

TEST_CASE("compute_rmse of a constant offset is the offset magnitude") {
  const SrtmModel model = testing::random_model(2, 2, 1, 0, 2);
  const Trajectory traj = simulate(model, 5, {}, 4);
  const double delta = 0.75;
  std::vector<IntervalPosterior> shifted(5);
  for (int k = 1; k <= 5; ++k) {
    shifted[k - 1].mean.resize(2 * 2);
    for (int i = 1; i <= 2; ++i) {
      shifted[k - 1].mean.segment((i - 1) * 2, 2) =
          traj.state(k, i, 2) + Vector::Constant(2, delta);
    }
    shifted[k - 1].cov = Matrix::Zero(4, 4);
  }
  CHECK(compute_rmse(shifted, traj, 2, 2) == doctest::Approx(delta).epsilon(1e-12));
}

TEST_CASE("compute_rmse rejects mismatched lengths") {
  const SrtmModel model = testing::random_model(3, 2, 1, 0, 2);
  const Trajectory traj = simulate(model, 5, {}, 4);
  std::vector<IntervalPosterior> four(4);
  CHECK_THROWS_AS(compute_rmse(four, traj, 2, 2), ModelError);
}

TEST_CASE("all four engines agree on the estimates they produce") {
  const SrtmModel model = benchmark_model(2, 1, 1, 3, 5);
  const InputSequence inputs = sinusoidal_inputs(model, 8);
  const Trajectory traj = simulate(model, 8, inputs, 11);
  WorkerPool pool(2);

  const EstimateRun seq_f = run_engine(Engine::seq_filter, model, traj.measurements,
                                       inputs, nullptr);
  const EstimateRun par_f = run_engine(Engine::par_filter, model, traj.measurements,
                                       inputs, &pool);
  const EstimateRun seq_s = run_engine(Engine::seq_smooth, model, traj.measurements,
                                       inputs, nullptr);
  const EstimateRun par_s = run_engine(Engine::par_smooth, model, traj.measurements,
                                       inputs, &pool);

  REQUIRE(seq_f.intervals.size() == 8);
  for (int k = 0; k < 8; ++k) {
    CHECK(testing::rel_err(par_f.intervals[k].mean, seq_f.intervals[k].mean) < 1e-9);
    CHECK(testing::rel_err(par_s.intervals[k].mean, seq_s.intervals[k].mean) < 1e-9);
    CHECK(testing::rel_err(par_s.intervals[k].cov, seq_s.intervals[k].cov) < 1e-9);
  }
  CHECK(par_f.filter_scan.combine_count > 0);
  CHECK(par_s.smoother_scan.combine_count > 0);
}

TEST_CASE("time_engine fills the record, sequential depth is N") {
  const SrtmModel model = benchmark_model(2, 1, 0, 2, 9);
  const Trajectory traj = simulate(model, 12, {}, 2);

  const RunRecord seq = time_engine(Engine::seq_filter, model, traj.measurements, {},
                                    nullptr, 3);
  CHECK(seq.trials == 3);
  CHECK(seq.n_intervals == 12);
  CHECK(seq.depth == 12);
  CHECK(seq.combine_count == 12);
  CHECK(seq.mean_time_s > 0.0);
  CHECK(seq.median_time_s > 0.0);

  WorkerPool pool(2);
  const RunRecord par = time_engine(Engine::par_filter, model, traj.measurements, {},
                                    &pool, 3);
  CHECK(par.depth <= 2 * 4 + 2); // ceil(log2 12) = 4
  CHECK(par.combine_count <= 2 * 12);
}

TEST_CASE("geometric grid spans the range and is strictly increasing") {
  const std::vector<int> grid = geometric_grid(16, 6000, 10);
  REQUIRE(!grid.empty());
  CHECK(grid.front() == 16);
  CHECK(grid.back() == 6000);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("timing CSV uses the plot-compatible column names") {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      ("srtm_bench_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);

  std::vector<RunRecord> records;
  for (Engine e : {Engine::par_filter, Engine::par_smooth, Engine::seq_filter,
                   Engine::seq_smooth}) {
    RunRecord r;
    r.n_intervals = 16;
    r.engine = e;
    r.mean_time_s = 0.5;
    r.trials = 1;
    records.push_back(r);
  }
  const std::string path = (dir / "timing.csv").string();
  save_timing_csv(path, records);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "lengths_space,gpu_par_filter_mean_times,gpu_par_smooth_mean_times,"
        "gpu_seq_filter_mean_times,gpu_seq_smooth_mean_times");
  std::string row;
  std::getline(in, row);
  CHECK(row == "16,0.5,0.5,0.5,0.5");
  std::filesystem::remove_all(dir);
}

TEST_CASE("engine names round trip") {
  for (Engine e : {Engine::seq_filter, Engine::seq_smooth, Engine::par_filter,
                   Engine::par_smooth}) {
    CHECK(engine_from_string(to_string(e)) == e);
  }
  CHECK_THROWS_AS(engine_from_string("warp_drive"), ModelError);
}
