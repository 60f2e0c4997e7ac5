#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ignn {

// Row-major doubles everywhere; graph operators stream rows.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Training loss left the reals (NaN/Inf); carries the epoch it happened in.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& msg, int epoch) : Error(msg), epoch(epoch) {}
  int epoch = -1;
};

// Iterative solver hit its cap; last_estimate is the best value seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, double last_estimate)
      : Error(msg), last_estimate(last_estimate) {}
  double last_estimate = 0.0;
};

}  // namespace ignn
