#pragma once

#include <stdexcept>
#include <string>

namespace gooed {

inline constexpr const char* kVersion = "0.1.0";

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration, unknown problem name, out-of-domain query.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A forward model (observation, prediction, PDE solve) produced a
/// non-finite value.
class ModelEvalError : public Error {
 public:
  using Error::Error;
};

/// Numerical machinery failure: KDE fit, bandwidth selection, Cholesky.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Estimator-level failure (chain initialization, repeated outer-iteration
/// failure, diagnostics requested before any work was done).
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// Filesystem and output errors.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gooed
