#pragma once

#include <vector>

#include "srtm/model.hpp"
#include "srtm/scan.hpp"
#include "srtm/sequential.hpp"
#include "srtm/state.hpp"

namespace srtm {

/// Scan element for the slow-rate filter: parameterizes
/// p(x_{k,l} | y_k, x_{k-1,l}) = N(F x + d, D) together with the information
/// form (eta, J) of p(y_k | x_{k-1,l}).
struct FilterElement {
  Matrix F;
  Vector d;
  Matrix D;
  Vector eta;
  Matrix J;
};

/// Scan element for the interval smoother: parameterizes
/// p(x_{k,1} | y_{1:k}, x_{k+1,1}) = N(E x + g, S).
struct SmootherElement {
  Matrix E;
  Vector g;
  Matrix S;
};

/// Result of the parallel smoother: smoothing marginals of x_{k,1} plus the
/// fully expanded interval posteriors, with the scan instrumentation of both
/// passes.
struct ParallelSmootherResult {
  std::vector<GaussianState> smoothed_first;
  std::vector<IntervalPosterior> smoothed_intervals;
  ScanStats filter_scan;
  ScanStats smoother_scan;
};

/// Builds the filter scan elements. Element 1 embeds the prior through one
/// explicit predict/update (F = 0, d/D the first filtered moments, eta = 0,
/// J = 0); elements k > 1 are stationary in everything but (d_k, eta_k).
std::vector<FilterElement> make_filter_elements(const SrtmModel& model,
                                                const LiftedSlowModel& lifted,
                                                const std::vector<Vector>& ys,
                                                const InputSequence& inputs = {});

/// The filter combination operator; associative.
FilterElement combine_filter(const FilterElement& a, const FilterElement& b);

/// Builds the smoother scan elements from the fast-rate posteriors (needs
/// mean blocks 1 and l and covariance blocks (1,1), (1,l), (l,l)). Element N
/// is the terminal case (E = 0, g/S the filtered moments of x_{N,1}).
std::vector<SmootherElement> make_smoother_elements(
    const SrtmModel& model, const BatchIntervalModel& batch,
    const std::vector<IntervalPosterior>& fast, const InputSequence& inputs = {});

/// The smoother combination operator; associative.
SmootherElement combine_smoother(const SmootherElement& a, const SmootherElement& b);

/// Slow-rate filtering marginals via a forward associative scan; identical
/// results to imkf_filter.
std::vector<GaussianState> parallel_imkf(const SrtmModel& model,
                                         const std::vector<Vector>& ys,
                                         const InputSequence& inputs = {},
                                         WorkerPool* pool = nullptr,
                                         ScanStats* stats = nullptr);

/// Full parallel smoother: parallel filter scan, parallel fast-rate
/// interval filtering, reverse smoother scan, parallel interval expansion.
ParallelSmootherResult parallel_ims(const SrtmModel& model, const std::vector<Vector>& ys,
                                    const InputSequence& inputs = {},
                                    WorkerPool* pool = nullptr,
                                    IntervalCovMode mode = IntervalCovMode::full);

} // namespace srtm
