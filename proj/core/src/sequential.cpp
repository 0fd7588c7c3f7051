#include "srtm/sequential.hpp"

#include <string>

namespace srtm {

namespace {

void check_interval_count(std::size_t n) {
  if (n == 0) throw ModelError("need at least one measurement interval");
}

// Fills the requested blocks of post = base - left * right, where left is
// (l n_x) x n_y and right is n_y x (l n_x). Block-by-block so that full and
// reduced mode produce bit-identical values on the blocks both compute.
Matrix blockwise_update(const Matrix& base, const Matrix& left, const Matrix& right,
                        int l, int n_x, IntervalCovMode mode) {
  Matrix post = Matrix::Zero(base.rows(), base.cols());
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j <= i; ++j) {
      if (mode == IntervalCovMode::reduced && j != i && i != l - 1) continue;
      Matrix block = base.block(i * n_x, j * n_x, n_x, n_x) -
                     left.middleRows(i * n_x, n_x) * right.middleCols(j * n_x, n_x);
      post.block(i * n_x, j * n_x, n_x, n_x) = block;
      if (j != i) post.block(j * n_x, i * n_x, n_x, n_x) = block.transpose();
    }
  }
  return post;
}

} // namespace

GaussianState imkf_predict(const GaussianState& prev, const LiftedSlowModel& lifted,
                           const Vector& ubar) {
  GaussianState out;
  out.mean = lifted.Abar * prev.mean + lifted.Bbar * ubar;
  out.cov = symmetrize(lifted.Abar * prev.cov * lifted.Abar.transpose() + lifted.Qbar);
  return out;
}

GaussianState imkf_update(const GaussianState& prev, const GaussianState& pred,
                          const LiftedSlowModel& lifted, const Vector& ubar,
                          const Vector& y) {
  // Cross term between the predicted state and the measurement, both as
  // functions of (x_{k-1,l}, wbar_k).
  const Matrix cross = lifted.Abar * prev.cov * lifted.Cbar.transpose() +
                       lifted.Gbar * lifted.Qtilde * lifted.Mbar.transpose();
  const Matrix s = symmetrize(lifted.Cbar * prev.cov * lifted.Cbar.transpose() + lifted.Rx);
  const Matrix gain = solve_spd(s, cross.transpose(), "slow-rate innovation").transpose();

  GaussianState out;
  out.mean = pred.mean + gain * (y - lifted.Cbar * prev.mean - lifted.Dbar * ubar);
  out.cov = symmetrize(pred.cov - gain * cross.transpose());
  return out;
}

std::vector<GaussianState> imkf_filter(const SrtmModel& model,
                                       const std::vector<Vector>& ys,
                                       const InputSequence& inputs) {
  check_interval_count(ys.size());
  const LiftedSlowModel lifted = lift_slow_model(model);
  const int n = static_cast<int>(ys.size());

  std::vector<GaussianState> out;
  out.reserve(n);
  GaussianState prev{model.m0, model.P0};
  for (int k = 1; k <= n; ++k) {
    const Vector ubar = stack_inputs(model, inputs, k);
    const GaussianState pred = imkf_predict(prev, lifted, ubar);
    try {
      prev = imkf_update(prev, pred, lifted, ubar, ys[k - 1]);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at step " + std::to_string(k));
    }
    out.push_back(prev);
  }
  return out;
}

std::vector<IntervalPosterior> fast_rate_filter(
    const SrtmModel& model, const BatchIntervalModel& batch,
    const std::vector<GaussianState>& slow_states, const std::vector<Vector>& ys,
    const InputSequence& inputs, WorkerPool* pool, IntervalCovMode mode) {
  check_interval_count(ys.size());
  const int n = static_cast<int>(ys.size());
  if (static_cast<int>(slow_states.size()) < n) {
    throw ModelError("fast_rate_filter: slow-rate results missing");
  }
  const int n_x = model.state_dim();
  const int l = model.l;
  Matrix qtilde = Matrix::Zero(l * n_x, l * n_x);
  for (int j = 0; j < l; ++j) qtilde.block(j * n_x, j * n_x, n_x, n_x) = model.Q;
  const Matrix g_qtilde_gt = symmetrize(batch.calG * qtilde * batch.calG.transpose());
  const GaussianState prior{model.m0, model.P0};

  std::vector<IntervalPosterior> out(n);
  auto run_interval = [&](std::size_t idx) {
    const int k = static_cast<int>(idx) + 1;
    const GaussianState& prev = (k == 1) ? prior : slow_states[k - 2];
    const Vector ubar = stack_inputs(model, inputs, k);

    const Vector mean_pred = batch.calA * prev.mean + batch.calB * ubar;
    const Matrix cov_pred =
        symmetrize(batch.calA * prev.cov * batch.calA.transpose() + g_qtilde_gt);

    const Matrix cross = cov_pred * batch.H.transpose(); // (l n_x) x n_y
    const Matrix s = symmetrize(batch.H * cross + model.R);
    Matrix gain;
    try {
      gain = solve_spd(s, cross.transpose(), "fast-rate innovation").transpose();
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at step " + std::to_string(k));
    }
    const Matrix h_cov_pred = batch.H * cov_pred; // n_y x (l n_x)

    IntervalPosterior post;
    post.mean = mean_pred + gain * (ys[idx] - batch.H * mean_pred);
    post.cov = blockwise_update(cov_pred, gain, h_cov_pred, l, n_x, mode);
    out[idx] = std::move(post);
  };

  if (pool) {
    pool->parallel_for(static_cast<std::size_t>(n), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) run_interval(i);
    });
  } else {
    for (int i = 0; i < n; ++i) run_interval(i);
  }
  return out;
}

std::vector<GaussianState> ims_smooth_slow(const SrtmModel& model,
                                           const BatchIntervalModel& batch,
                                           const std::vector<IntervalPosterior>& fast,
                                           const InputSequence& inputs) {
  check_interval_count(fast.size());
  const int n = static_cast<int>(fast.size());
  const int n_x = model.state_dim();
  const int l = model.l;
  if (fast.front().mean.size() != batch.calA.rows()) {
    throw ModelError("ims_smooth_slow: interval posterior dimension mismatch");
  }

  std::vector<GaussianState> out(n);
  out[n - 1] = fast[n - 1].marginal(1, n_x); // no data after y_N
  for (int k = n - 1; k >= 1; --k) {
    const IntervalPosterior& cur = fast[k - 1];
    const Vector u_last = last_interval_input(model, inputs, k);
    const Vector mean_pred = model.A * cur.mean_block(l, n_x) + model.B * u_last;
    const Matrix cov_pred = symmetrize(
        model.A * cur.cov_block(l, l, n_x) * model.A.transpose() + model.Q);
    const Matrix cross_1l = cur.cov_block(1, l, n_x); // cov(x_{k,1}, x_{k,l})
    Matrix gain;
    try {
      gain = solve_spd(cov_pred, (cross_1l * model.A.transpose()).transpose(),
                       "smoother predictive covariance")
                 .transpose();
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at step " + std::to_string(k));
    }
    const GaussianState& next = out[k]; // smoothed x_{k+1,1}
    GaussianState sm;
    sm.mean = cur.mean_block(1, n_x) + gain * (next.mean - mean_pred);
    sm.cov = symmetrize(cur.cov_block(1, 1, n_x) +
                        gain * (next.cov - cov_pred) * gain.transpose());
    out[k - 1] = std::move(sm);
  }
  return out;
}

std::vector<IntervalPosterior> ims_expand_intervals(
    const SrtmModel& model, const BatchIntervalModel& batch,
    const std::vector<IntervalPosterior>& fast,
    const std::vector<GaussianState>& smoothed_first, const InputSequence& inputs,
    WorkerPool* pool, IntervalCovMode mode) {
  check_interval_count(fast.size());
  const int n = static_cast<int>(fast.size());
  if (smoothed_first.size() != fast.size()) {
    throw ModelError("ims_expand_intervals: smoothed slow-rate results missing");
  }
  if (fast.front().mean.size() != batch.calA.rows()) {
    throw ModelError("ims_expand_intervals: interval posterior dimension mismatch");
  }
  const int n_x = model.state_dim();
  const int l = model.l;

  std::vector<IntervalPosterior> out(n);
  out[n - 1] = fast[n - 1]; // terminal interval: smoothed = filtered

  auto run_interval = [&](std::size_t idx) {
    const int k = static_cast<int>(idx) + 1;
    const IntervalPosterior& cur = fast[idx];
    const Vector u_last = last_interval_input(model, inputs, k);
    const Vector mean_pred = model.A * cur.mean_block(l, n_x) + model.B * u_last;
    const Matrix cov_pred = symmetrize(
        model.A * cur.cov_block(l, l, n_x) * model.A.transpose() + model.Q);

    // cov(X_{k,1:l}, x_{k,l}) A^T: the last block column against Ahat.
    const Matrix cross = cur.cov.rightCols(n_x) * model.A.transpose(); // (l n_x) x n_x
    Matrix gain;
    try {
      gain = solve_spd(cov_pred, cross.transpose(), "expansion predictive covariance")
                 .transpose();
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at step " + std::to_string(k));
    }

    const GaussianState& next = smoothed_first[idx + 1]; // smoothed x_{k+1,1}
    const Matrix delta_cov = next.cov - cov_pred;

    IntervalPosterior sm;
    sm.mean = cur.mean + gain * (next.mean - mean_pred);
    sm.cov = Matrix::Zero(l * n_x, l * n_x);
    for (int i = 0; i < l; ++i) {
      for (int j = 0; j <= i; ++j) {
        if (mode == IntervalCovMode::reduced && j != i && i != l - 1) continue;
        Matrix block = cur.cov.block(i * n_x, j * n_x, n_x, n_x) +
                       gain.middleRows(i * n_x, n_x) * delta_cov *
                           gain.middleRows(j * n_x, n_x).transpose();
        sm.cov.block(i * n_x, j * n_x, n_x, n_x) = block;
        if (j != i) sm.cov.block(j * n_x, i * n_x, n_x, n_x) = block.transpose();
      }
    }
    out[idx] = std::move(sm);
  };

  const std::size_t work = static_cast<std::size_t>(n) - 1;
  if (work > 0) {
    if (pool) {
      pool->parallel_for(work, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) run_interval(i);
      });
    } else {
      for (std::size_t i = 0; i < work; ++i) run_interval(i);
    }
  }
  return out;
}

} // namespace srtm
