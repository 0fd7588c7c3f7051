#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "srtm/errors.hpp"

namespace srtm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// (X + X^T) / 2. Applied to every covariance output to suppress
/// asymmetry drift.
inline Matrix symmetrize(const Matrix& x) { return 0.5 * (x + x.transpose()); }

/// Solves S * X = B for symmetric positive definite S via Cholesky.
/// Falls back to full-pivot LU (with a conditioning check) when the
/// factorization reports the matrix is not PD.
Matrix solve_spd(const Matrix& s, const Matrix& b, const std::string& context);

/// Solves a general square system M * X = B; throws NumericalError when M is
/// singular to working precision.
Matrix solve_general(const Matrix& m, const Matrix& b, const std::string& context);

/// Symmetric factor F with F * F^T = M for symmetric PSD M (eigenvalue
/// based so that singular covariances, e.g. Q = 0, remain usable).
/// Throws NumericalError if M has an eigenvalue below -tol * max|eig|.
Matrix psd_sqrt_factor(const Matrix& m, const std::string& context);

/// [I, A, A^2, ..., A^max_power], computed by iterated multiplication.
std::vector<Matrix> matrix_power_prefixes(const Matrix& a, int max_power);

bool is_symmetric(const Matrix& m, double tol = 1e-12);

/// Minimum eigenvalue >= -tol * max(1, ||m||).
bool is_psd(const Matrix& m, double tol = 1e-9);

/// ||x - ref||_F / max(1, ||ref||_F).
double relative_error(const Matrix& x, const Matrix& ref);

} // namespace srtm
