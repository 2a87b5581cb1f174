#pragma once

#include <stdexcept>
#include <string>

namespace chordlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two beads coincide (or nearly so) where a chord is inverted or a Green's
/// function is evaluated.
class SingularChordError : public Error {
 public:
  using Error::Error;
};

/// A Fourier loop whose speed (nearly) vanishes somewhere.
class DegenerateCurveError : public Error {
 public:
  using Error::Error;
};

/// A loop that was required to be unit-speed is not.
class ParametrizationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid loop specification / report input.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// File could not be written or read.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A numerical assumption the algorithms rely on was observed to fail
/// (e.g. monotonicity of the minimal Q eigenvalue in kappa).
class AssumptionError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference step too small or too large to give stable results.
class StepSizeError : public AssumptionError {
 public:
  using AssumptionError::AssumptionError;
};

}  // namespace chordlab
