#pragma once

#include <stdexcept>
#include <string>

namespace annulus {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or degenerate geometric input (non-convex, clockwise, zero area, ...).
class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

/// A parallel body or clipping result collapsed to nothing.
class EmptyBody : public Error {
 public:
  using Error::Error;
};

/// A query point lies outside the closure of the domain it refers to.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested construction has no solution (e.g. hole deficit too large).
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// Inner body is not compactly contained in the outer one.
class ContainmentError : public Error {
 public:
  using Error::Error;
};

/// Curvature requested on a curve without a smooth parameterization.
class CurvatureUnavailable : public Error {
 public:
  using Error::Error;
};

/// ODE integration or another numerical kernel broke down.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// No sign change of the shooting residual below the configured eigenvalue cap.
class BracketFailure : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Argument outside the documented range of a function.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// The structured mesher rejected the domain.
class MesherError : public Error {
 public:
  using Error::Error;
};

/// Linear or eigen solver failed to converge.
class SolverError : public NumericalFailure {
 public:
  SolverError(const std::string& what, double residual)
      : NumericalFailure(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace annulus
