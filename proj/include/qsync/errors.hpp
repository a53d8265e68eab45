#pragma once

#include <stdexcept>
#include <string>

namespace qsync {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration, malformed input file or bad argument.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input covariance data violating the uncertainty principle or otherwise
/// unusable by a Gaussian-state formula.
class NonPhysicalError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf appeared while integrating.
class IntegrationBlowup : public Error {
 public:
  IntegrationBlowup(std::string component, double t);

  const std::string& component() const { return component_; }
  double time() const { return time_; }

 private:
  std::string component_;
  double time_;
};

/// Synchronization conditions without a nonnegative coupling solution.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitInfeasible = 4;

}  // namespace qsync
