#pragma once

#include <limits>
#include <stdexcept>
#include <string>

#include "symorb/vec2.hpp"

namespace symorb {

/// Root of every failure raised by the solver library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// The trajectory (or an evaluation point) left the annulus on which the field is defined.
class DomainExit : public Error {
  public:
    DomainExit(const std::string& what, State where) : Error(what), state_(where) {}
    explicit DomainExit(const std::string& what) : Error(what) {}

    /// Exit time and state; `t` is NaN when raised by a pointwise force evaluation.
    [[nodiscard]] const State& state() const { return state_; }

  private:
    State state_{std::numeric_limits<double>::quiet_NaN(), {}, {}};
};

class StepFailure : public Error {
  public:
    using Error::Error;
};

class SymmetryViolation : public Error {
  public:
    SymmetryViolation(const std::string& what, double residual) : Error(what), residual_(residual) {}
    [[nodiscard]] double residual() const { return residual_; }

  private:
    double residual_;
};

// Section-crossing failures.
class CrossingError : public Error {
  public:
    using Error::Error;
};
class NoCrossing : public CrossingError {
  public:
    using CrossingError::CrossingError;
};
class TangentialCrossing : public CrossingError {
  public:
    using CrossingError::CrossingError;
};
class BoundaryCrossing : public CrossingError {
  public:
    using CrossingError::CrossingError;
};

// Shooting failures.
class BracketFailure : public Error {
  public:
    using Error::Error;
};
class NonConvergence : public Error {
  public:
    using Error::Error;
};

class HypothesisViolation : public Error {
  public:
    using Error::Error;
};
class PointOnCurve : public Error {
  public:
    using Error::Error;
};

class NoBoundedMotion : public Error {
  public:
    using Error::Error;
};
class DegenerateLimit : public Error {
  public:
    using Error::Error;
};

class BoundaryHypothesisFailure : public Error {
  public:
    using Error::Error;
};

}  // namespace symorb
