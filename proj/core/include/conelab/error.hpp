#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace conelab {

enum class ErrorCode {
  kDimensionMismatch,
  kInvalidArgument,
  kUnsupported,
  kDualUnavailable,
  kNotRescalable,
  kNonConvergence,
  kHypothesis,
  kNotSeparable,
  kVerification,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Thrown when an iterative projection exhausts its budget. Carries the best
// iterate so callers can decide whether it is good enough.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, Eigen::VectorXd best,
                      double gap, int iterations)
      : Error(ErrorCode::kNonConvergence, what),
        best_(std::move(best)),
        gap_(gap),
        iterations_(iterations) {}
  const Eigen::VectorXd& best_iterate() const { return best_; }
  double gap() const { return gap_; }
  int iterations() const { return iterations_; }

 private:
  Eigen::VectorXd best_;
  double gap_;
  int iterations_;
};

void require_dim(Eigen::Index expected, Eigen::Index actual, const char* what);

}  // namespace conelab
