#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wavepml {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Precondition or parameter-range violation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Spectral parameter coincides with a cross-section threshold.
class ThresholdError : public Error {
 public:
  using Error::Error;
};

/// Complex evaluation point left the analyticity sector or hit a branch cut.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Metric determinant fell below the non-degeneracy tolerance.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Modal basis too small to certify the requested quantity.
class InsufficientModesError : public Error {
 public:
  using Error::Error;
};

/// Mesh or matrix would exceed the configured resource budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Linear solve failed or missed its residual contract.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(what), residual_achieved(residual) {}
  double residual_achieved;
};

/// Station pair unusable for amplitude extraction.
class StationError : public Error {
 public:
  using Error::Error;
};

/// Curve sampling too coarse for the requested measurement.
class RefinementError : public Error {
 public:
  using Error::Error;
};

/// Study could not produce a conclusive fit.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Config file rejected; carries every violation found, not just the first.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> violations_)
      : Error(what), violations(std::move(violations_)) {}
  std::vector<std::string> violations;
};

}  // namespace wavepml
