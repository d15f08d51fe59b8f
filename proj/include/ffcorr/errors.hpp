#pragma once

#include <stdexcept>
#include <string>

namespace ffcorr {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid parameter value (q out of range, epsilon <= 0, ...).
struct DomainError : Error {
  using Error::Error;
};

// Vector/operator size mismatch.
struct DimensionError : Error {
  using Error::Error;
};

// Malformed model file or unparsable input.
struct ParseError : Error {
  using Error::Error;
};

// A spec invariant is violated (reported per term where possible).
struct ValidationError : Error {
  using Error::Error;
};

// Caller handed in a state/operator that breaks an operation's contract,
// e.g. a non-ground state where a ground state is required, or a map that
// fails the Hermitian adjoint probe.
struct PreconditionError : Error {
  using Error::Error;
};

// Ground energy is above the zero tolerance: the spec is not frustration-free.
struct NotFrustrationFreeError : Error {
  using Error::Error;
};

// Total energy vanished but a per-term residual did not; the two views of
// frustration-freeness disagree beyond tolerance.
struct InconsistencyError : Error {
  using Error::Error;
};

// An iterative solver ran out of iterations. Carries the last two estimates
// so the caller can see how close it got.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& msg, double last, double previous, int iterations)
      : Error(msg), last_estimate(last), previous_estimate(previous), iterations(iterations) {}
  double last_estimate = 0.0;
  double previous_estimate = 0.0;
  int iterations = 0;
};

}  // namespace ffcorr
