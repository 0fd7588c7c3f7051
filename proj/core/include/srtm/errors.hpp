#pragma once

#include <stdexcept>
#include <string>

namespace srtm {

/// Raised for inconsistent model dimensions or malformed configuration.
class ModelError : public std::runtime_error {
public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a linear solve or factorization fails (ill-conditioned or
/// indefinite innovation/predictive covariance).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace srtm
