#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sip {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition or type invariant.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public InvalidArgument {
 public:
  RankDeficientError() : InvalidArgument("rank deficient subspace basis") {}
};

/// An iterative method ran out of iterations. `diagnostics` describes the
/// last iterate (bracket, gradient norm, ...).
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::string diagnostics)
      : Error(what + ": " + diagnostics), diagnostics_(std::move(diagnostics)) {}

  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

/// The interpolation constraints cannot be satisfied simultaneously.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, std::vector<double> residual_trace)
      : Error(what), residual_trace_(std::move(residual_trace)) {}

  /// Max-norm constraint residual per iteration (or the least-squares
  /// residual when detected up front).
  const std::vector<double>& residual_trace() const noexcept { return residual_trace_; }

 private:
  std::vector<double> residual_trace_;
};

class NotAdmissibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace sip
