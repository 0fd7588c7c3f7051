#pragma once

#include <vector>

#include "srtm/linalg.hpp"

namespace srtm {

/// Linear time-invariant state-space model whose measurement is the noisy
/// average of the last l fast-rate states:
///
///   x_{t+1} = A x_t + B u_t + w_t,            w_t ~ N(0, Q)
///   y_k     = (C/l) sum_{i=1..l} x_{k,i} + v_k,  v_k ~ N(0, R)
///
/// Interval k holds fast-rate states x_{k,1}, ..., x_{k,l}, with the
/// convention x_{k,0} = x_{k-1,l} and x_{0,l} = x_0 ~ N(m0, P0).
struct SrtmModel {
  Matrix A;  ///< state transition, n_x x n_x
  Matrix B;  ///< input matrix, n_x x n_u (n_u may be 0)
  Matrix C;  ///< measurement matrix, n_y x n_x
  Matrix Q;  ///< process-noise covariance, symmetric PSD
  Matrix R;  ///< measurement-noise covariance, symmetric PD
  Vector m0; ///< prior mean
  Matrix P0; ///< prior covariance, symmetric PSD
  int l = 1; ///< fast-rate samples per measurement interval

  int state_dim() const { return static_cast<int>(A.rows()); }
  int input_dim() const { return static_cast<int>(B.cols()); }
  int meas_dim() const { return static_cast<int>(C.rows()); }

  /// Throws ModelError on dimension mismatch.
  void validate_dimensions() const;

  /// Dimension checks plus covariance requirements (Q, P0 symmetric PSD and
  /// R symmetric PD). Throws ModelError.
  void validate() const;
};

/// Interval-level model obtained by marginalizing the intra-interval states:
///
///   x_{k,l} = Abar x_{k-1,l} + Bbar ubar_k + Gbar wbar_k
///   y_k     = Cbar x_{k-1,l} + Dbar ubar_k + Mbar wbar_k + v_k
///
/// with wbar_k the stacked process noises of the interval, cov Qtilde.
struct LiftedSlowModel {
  Matrix Abar;   ///< A^l
  Matrix Bbar;   ///< [A^{l-1} B, ..., B]
  Matrix Gbar;   ///< [A^{l-1}, ..., I]
  Matrix Qtilde; ///< blkdiag(Q, ..., Q), l blocks
  Matrix Qbar;   ///< Gbar Qtilde Gbar^T
  Matrix Cbar;   ///< (C/l) sum_{i=1..l} A^i
  Matrix Dbar;   ///< (C/l) [sum_{i=0..l-1} A^i B, ..., B]
  Matrix Mbar;   ///< (C/l) [sum_{i=0..l-1} A^i, ..., I]
  Matrix Rx;     ///< Mbar Qtilde Mbar^T + R
};

/// Stacked representation of one interval, X_{k,1:l} = [x_{k,1}; ...; x_{k,l}]:
///
///   X_{k,1:l} = calA x_{k-1,l} + calB ubar_k + calG wbar_k
///   y_k       = H X_{k,1:l} + v_k
///   x_{k+1,1} = Ahat X_{k,1:l} + B u_{k,l} + w_{k,l}
struct BatchIntervalModel {
  Matrix calA; ///< [A; A^2; ...; A^l]
  Matrix calG; ///< block lower triangular, (i,j) block = A^{i-j}
  Matrix calB; ///< block lower triangular, (i,j) block = A^{i-j} B
  Matrix H;    ///< (1/l) [C, ..., C]
  Matrix Ahat; ///< [0, ..., 0, A]
};

/// Fast-rate inputs u_{k,i}, k = 0..N, i = 1..l. Slot (0,l) is the input
/// applied at the prior state. A default-constructed sequence means "no
/// inputs"; every consumer then treats u as zero.
class InputSequence {
public:
  InputSequence() = default;
  InputSequence(int n_intervals, int l, int n_u);

  static InputSequence zero(int n_intervals, int l, int n_u) {
    return InputSequence(n_intervals, l, n_u);
  }

  bool empty() const { return slots_.empty(); }
  int intervals() const { return n_intervals_; }
  int samples_per_interval() const { return l_; }
  int input_dim() const { return n_u_; }

  /// u_{k,i}; throws ModelError when (k, i) is out of range.
  const Vector& at(int k, int i) const;
  Vector& at(int k, int i);

private:
  int n_intervals_ = 0;
  int l_ = 0;
  int n_u_ = 0;
  std::vector<Vector> slots_;
};

/// Builds the lifted slow-rate model. Powers of A are computed once by
/// iterated multiplication and shared across all blocks.
LiftedSlowModel lift_slow_model(const SrtmModel& model);

/// Builds the stacked intra-interval model.
BatchIntervalModel build_batch_model(const SrtmModel& model);

/// ubar_k = [u_{k-1,l}; u_{k,1}; ...; u_{k,l-1}], the l inputs driving
/// interval k. An empty sequence yields the zero vector of length l * n_u.
Vector stack_inputs(const SrtmModel& model, const InputSequence& inputs, int k);

/// u_{k,l} (zero when the sequence is empty); the input driving the
/// transition from x_{k,l} to x_{k+1,1}.
Vector last_interval_input(const SrtmModel& model, const InputSequence& inputs, int k);

} // namespace srtm
