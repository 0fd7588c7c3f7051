#pragma once

#include <vector>

#include "srtm/model.hpp"
#include "srtm/parallel.hpp"
#include "srtm/state.hpp"

namespace srtm {

/// Which cross-covariance blocks fast_rate_filter and ims_expand_intervals
/// fill in. `full` computes the entire (l n_x)^2 interval covariance;
/// `reduced` computes only the blocks every downstream consumer needs —
/// (i, i) and (i, l) for all i (and their mirrors) — leaving the rest zero.
/// The blocks that are computed are bit-identical between the two modes.
enum class IntervalCovMode { full, reduced };

/// Slow-rate prediction: m<sup>-</sup> = Abar m + Bbar ubar, P<sup>-</sup> = Abar P Abar^T + Qbar.
GaussianState imkf_predict(const GaussianState& prev, const LiftedSlowModel& lifted,
                           const Vector& ubar);

/// Slow-rate measurement update. `prev` is the filtered state of interval
/// k-1, `pred` the prediction for interval k. The gain carries the
/// correlation between the predicted state and the process noise embedded in
/// the integrated measurement (the Gbar Qtilde Mbar^T term).
GaussianState imkf_update(const GaussianState& prev, const GaussianState& pred,
                          const LiftedSlowModel& lifted, const Vector& ubar,
                          const Vector& y);

/// Filtering marginals of the slow-rate states x_{k,l}, k = 1..N.
std::vector<GaussianState> imkf_filter(const SrtmModel& model,
                                       const std::vector<Vector>& ys,
                                       const InputSequence& inputs = {});

/// Joint filtering posteriors over each interval's l states, including all
/// intra-interval cross-covariances. Intervals are independent given the
/// slow-rate results and are processed as a parallel map when a pool is
/// given; outputs do not depend on scheduling.
std::vector<IntervalPosterior> fast_rate_filter(
    const SrtmModel& model, const BatchIntervalModel& batch,
    const std::vector<GaussianState>& slow_states, const std::vector<Vector>& ys,
    const InputSequence& inputs = {}, WorkerPool* pool = nullptr,
    IntervalCovMode mode = IntervalCovMode::full);

/// Backward pass producing the smoothing marginals of x_{k,1}, k = 1..N.
/// Needs the fast-rate posteriors' blocks (1,1), (1,l), (l,l).
std::vector<GaussianState> ims_smooth_slow(const SrtmModel& model,
                                           const BatchIntervalModel& batch,
                                           const std::vector<IntervalPosterior>& fast,
                                           const InputSequence& inputs = {});

/// Expands the slow-rate smoothing results to full-interval smoothed
/// posteriors. smoothed_first[k-1] must hold the smoothed x_{k,1}
/// (ims_smooth_slow output). Interval N is the filtered posterior unchanged.
/// Intervals are independent (parallel map, scheduling-invariant).
std::vector<IntervalPosterior> ims_expand_intervals(
    const SrtmModel& model, const BatchIntervalModel& batch,
    const std::vector<IntervalPosterior>& fast,
    const std::vector<GaussianState>& smoothed_first, const InputSequence& inputs = {},
    WorkerPool* pool = nullptr, IntervalCovMode mode = IntervalCovMode::full);

} // namespace srtm
