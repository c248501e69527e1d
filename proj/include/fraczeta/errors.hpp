#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraczeta {

// Base class for all library errors. The CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent user input (bad scene fields, non-finite
// coordinates, mismatched dimensions, parameter ordering violations).
struct InvalidInputError : Error {
  using Error::Error;
};

// Evaluation requested left of (or at) the convergence abscissa.
struct DivergentAbscissaError : Error {
  DivergentAbscissaError(const std::string& msg, double abscissa_)
      : Error(msg), abscissa(abscissa_) {}
  double abscissa;
};

// Requested point is within the guard radius of a known pole.
struct NearPoleError : Error {
  NearPoleError(const std::string& msg, std::complex<double> pole_)
      : Error(msg), pole(pole_) {}
  std::complex<double> pole;
};

// Integration against a zero-mass measure with a relative-accuracy request.
struct DegenerateMeasureError : Error {
  using Error::Error;
};

// A quadrature or branch-and-bound loop could not reach the requested
// accuracy; carries the accuracy actually achieved.
struct AccuracyError : Error {
  AccuracyError(const std::string& msg, double achieved_)
      : Error(msg), achieved(achieved_) {}
  double achieved;
};

// Spectral measure has no eigenprojection with weight above threshold.
struct EmptySupportError : Error {
  using Error::Error;
};

// Transformation not valid for the given state (e.g. conjugation of a
// non-tracial state).
struct UnsupportedTransformError : Error {
  using Error::Error;
};

// A claimed support separation fails; carries a witness parameter point.
struct SeparationViolatedError : Error {
  SeparationViolatedError(const std::string& msg, std::vector<double> witness_)
      : Error(msg), witness(std::move(witness_)) {}
  std::vector<double> witness;
};

// Non-finite samples encountered on a residue contour.
struct ContourFailureError : Error {
  using Error::Error;
};

}  // namespace fraczeta
