#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace probreach {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr const char* kVersion = "0.3.0";

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A run configuration was rejected before dispatch.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: divergence of a simulated trajectory, an interval
/// primitive used outside its domain, a non sub-Gaussian sample, ...
class NumericError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public NumericError {
 public:
  DivergenceError(std::size_t step, std::string what, long trajectory = -1)
      : NumericError(std::move(what)), step_(step), trajectory_(trajectory) {}

  std::size_t step() const noexcept { return step_; }
  long trajectory() const noexcept { return trajectory_; }

 private:
  std::size_t step_;
  long trajectory_;
};

class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace probreach
