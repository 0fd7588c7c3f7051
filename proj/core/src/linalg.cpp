#include "srtm/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iostream>

namespace srtm {

Matrix solve_spd(const Matrix& s, const Matrix& b, const std::string& context) {
  if (s.rows() != s.cols() || s.rows() != b.rows()) {
    throw ModelError("solve_spd: dimension mismatch in " + context);
  }
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() == Eigen::Success) {
    return llt.solve(b);
  }
  // Not PD to working precision; retry with LU and check conditioning.
  Eigen::FullPivLU<Matrix> lu(s);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) {
    throw NumericalError("singular covariance in " + context);
  }
  std::cerr << "srtm: warning: covariance not positive definite in " << context
            << ", using LU solve\n";
  return lu.solve(b);
}

Matrix solve_general(const Matrix& m, const Matrix& b, const std::string& context) {
  if (m.rows() != m.cols() || m.rows() != b.rows()) {
    throw ModelError("solve_general: dimension mismatch in " + context);
  }
  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) {
    throw NumericalError("singular system in " + context);
  }
  return lu.solve(b);
}

Matrix psd_sqrt_factor(const Matrix& m, const std::string& context) {
  if (m.rows() != m.cols()) {
    throw ModelError("psd_sqrt_factor: matrix not square in " + context);
  }
  if (m.size() == 0) {
    return m;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition failed in " + context);
  }
  const Vector& evals = es.eigenvalues();
  const double scale = std::max(1.0, evals.cwiseAbs().maxCoeff());
  if (evals.minCoeff() < -1e-9 * scale) {
    throw NumericalError("matrix not positive semidefinite in " + context);
  }
  Vector root = evals.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

std::vector<Matrix> matrix_power_prefixes(const Matrix& a, int max_power) {
  if (a.rows() != a.cols()) {
    throw ModelError("matrix_power_prefixes: matrix not square");
  }
  std::vector<Matrix> powers;
  powers.reserve(static_cast<std::size_t>(max_power) + 1);
  powers.push_back(Matrix::Identity(a.rows(), a.cols()));
  for (int i = 1; i <= max_power; ++i) {
    powers.push_back(powers.back() * a);
  }
  return powers;
}

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.norm());
  return (m - m.transpose()).norm() <= tol * scale;
}

bool is_psd(const Matrix& m, double tol) {
  if (!is_symmetric(m, 1e-9)) return false;
  if (m.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
  if (es.info() != Eigen::Success) return false;
  const double scale = std::max(1.0, m.norm());
  return es.eigenvalues().minCoeff() >= -tol * scale;
}

double relative_error(const Matrix& x, const Matrix& ref) {
  return (x - ref).norm() / std::max(1.0, ref.norm());
}

} // namespace srtm
