#include "srtm/elements.hpp"

namespace srtm {

std::vector<FilterElement> make_filter_elements(const SrtmModel& model,
                                                const LiftedSlowModel& lifted,
                                                const std::vector<Vector>& ys,
                                                const InputSequence& inputs) {
  if (ys.empty()) throw ModelError("make_filter_elements: no measurements");
  const int n = static_cast<int>(ys.size());
  const int n_x = model.state_dim();

  std::vector<FilterElement> out(n);

  // Element 1 carries the first Kalman step from the prior.
  {
    const Vector ubar = stack_inputs(model, inputs, 1);
    const GaussianState prior{model.m0, model.P0};
    const GaussianState pred = imkf_predict(prior, lifted, ubar);
    const GaussianState first = imkf_update(prior, pred, lifted, ubar, ys[0]);
    out[0] = FilterElement{Matrix::Zero(n_x, n_x), first.mean, first.cov,
                           Vector::Zero(n_x), Matrix::Zero(n_x, n_x)};
  }
  if (n == 1) return out;

  // For k > 1 the gain and the quadratic terms are stationary; only d_k and
  // eta_k depend on the data.
  const Matrix gq_mt = lifted.Gbar * lifted.Qtilde * lifted.Mbar.transpose();
  const Matrix gain =
      solve_spd(lifted.Rx, gq_mt.transpose(), "filter element gain").transpose();
  const Matrix f = lifted.Abar - gain * lifted.Cbar;
  const Matrix d_cov =
      symmetrize(lifted.Qbar - gain * lifted.Mbar * lifted.Qtilde * lifted.Gbar.transpose());
  const Matrix bkd = lifted.Bbar - gain * lifted.Dbar;
  const Matrix rx_inv_c = solve_spd(lifted.Rx, lifted.Cbar, "filter element information");
  const Matrix j = symmetrize(lifted.Cbar.transpose() * rx_inv_c);

  for (int k = 2; k <= n; ++k) {
    const Vector ubar = stack_inputs(model, inputs, k);
    FilterElement e;
    e.F = f;
    e.d = gain * ys[k - 1] + bkd * ubar;
    e.D = d_cov;
    e.eta = rx_inv_c.transpose() * (ys[k - 1] - lifted.Dbar * ubar);
    e.J = j;
    out[k - 1] = std::move(e);
  }
  return out;
}

FilterElement combine_filter(const FilterElement& a, const FilterElement& b) {
  const int n_x = static_cast<int>(a.F.rows());
  const Matrix identity = Matrix::Identity(n_x, n_x);

  // (I + D_a J_b) and (I + J_b D_a) are solved, never inverted; both are
  // nonsingular for PSD D, J.
  const Matrix lhs = identity + a.D * b.J;
  const Matrix fb_z = solve_general(lhs.transpose(), b.F.transpose(),
                                    "filter combine (I + D J)")
                          .transpose(); // b.F * lhs^{-1}
  const Matrix lhs_t = identity + b.J * a.D;
  const Matrix fa_zt = solve_general(lhs_t.transpose(), a.F, "filter combine (I + J D)")
                           .transpose(); // a.F^T * lhs_t^{-1}

  FilterElement r;
  r.F = fb_z * a.F;
  r.d = fb_z * (a.d + a.D * b.eta) + b.d;
  r.D = symmetrize(fb_z * a.D * b.F.transpose() + b.D);
  r.eta = fa_zt * (b.eta - b.J * a.d) + a.eta;
  r.J = symmetrize(fa_zt * b.J * a.F + a.J);
  return r;
}

std::vector<SmootherElement> make_smoother_elements(
    const SrtmModel& model, const BatchIntervalModel& batch,
    const std::vector<IntervalPosterior>& fast, const InputSequence& inputs) {
  if (fast.empty()) throw ModelError("make_smoother_elements: no intervals");
  if (fast.front().mean.size() != batch.calA.rows()) {
    throw ModelError("make_smoother_elements: interval posterior dimension mismatch");
  }
  const int n = static_cast<int>(fast.size());
  const int n_x = model.state_dim();
  const int l = model.l;

  std::vector<SmootherElement> out(n);
  out[n - 1] = SmootherElement{Matrix::Zero(n_x, n_x), fast[n - 1].mean_block(1, n_x),
                               fast[n - 1].cov_block(1, 1, n_x)};
  for (int k = 1; k < n; ++k) {
    const IntervalPosterior& cur = fast[k - 1];
    const Matrix cov_pred = symmetrize(
        model.A * cur.cov_block(l, l, n_x) * model.A.transpose() + model.Q);
    const Matrix cross_1l = cur.cov_block(1, l, n_x);
    const Matrix e = solve_spd(cov_pred, (cross_1l * model.A.transpose()).transpose(),
                               "smoother element predictive covariance")
                         .transpose();
    const Vector u_last = last_interval_input(model, inputs, k);
    SmootherElement s;
    s.E = e;
    s.g = cur.mean_block(1, n_x) -
          e * (model.A * cur.mean_block(l, n_x) + model.B * u_last);
    s.S = symmetrize(cur.cov_block(1, 1, n_x) - e * model.A * cross_1l.transpose());
    out[k - 1] = std::move(s);
  }
  return out;
}

SmootherElement combine_smoother(const SmootherElement& a, const SmootherElement& b) {
  SmootherElement r;
  r.E = a.E * b.E;
  r.g = a.E * b.g + a.g;
  r.S = symmetrize(a.E * b.S * a.E.transpose() + a.S);
  return r;
}

std::vector<GaussianState> parallel_imkf(const SrtmModel& model,
                                         const std::vector<Vector>& ys,
                                         const InputSequence& inputs, WorkerPool* pool,
                                         ScanStats* stats) {
  const LiftedSlowModel lifted = lift_slow_model(model);
  std::vector<FilterElement> elements = make_filter_elements(model, lifted, ys, inputs);
  std::vector<FilterElement> scanned = associative_scan(
      std::move(elements), combine_filter, ScanDirection::forward, pool, stats);

  std::vector<GaussianState> out;
  out.reserve(scanned.size());
  for (FilterElement& e : scanned) {
    out.push_back(GaussianState{std::move(e.d), symmetrize(e.D)});
  }
  return out;
}

ParallelSmootherResult parallel_ims(const SrtmModel& model, const std::vector<Vector>& ys,
                                    const InputSequence& inputs, WorkerPool* pool,
                                    IntervalCovMode mode) {
  ParallelSmootherResult result;
  const std::vector<GaussianState> slow =
      parallel_imkf(model, ys, inputs, pool, &result.filter_scan);
  const BatchIntervalModel batch = build_batch_model(model);
  const std::vector<IntervalPosterior> fast =
      fast_rate_filter(model, batch, slow, ys, inputs, pool, mode);

  std::vector<SmootherElement> elements = make_smoother_elements(model, batch, fast, inputs);
  std::vector<SmootherElement> scanned =
      associative_scan(std::move(elements), combine_smoother, ScanDirection::reverse,
                       pool, &result.smoother_scan);

  result.smoothed_first.reserve(scanned.size());
  for (SmootherElement& e : scanned) {
    result.smoothed_first.push_back(GaussianState{std::move(e.g), symmetrize(e.S)});
  }
  result.smoothed_intervals = ims_expand_intervals(model, batch, fast,
                                                   result.smoothed_first, inputs, pool, mode);
  return result;
}

} // namespace srtm
