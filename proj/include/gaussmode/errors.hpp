#pragma once

#include <stdexcept>
#include <string>

namespace gaussmode {

/// Base class for all gaussmode errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// The canonical transformation does not exist: Delta = 0 with omega != 0
/// (the quadratic form is non-diagonalizable there).
class DegenerateTransform : public Error {
 public:
  explicit DegenerateTransform(const std::string& msg) : Error(msg) {}
};

/// A normal-mode frequency squared (or Delta^2) is negative: no stable
/// oscillator spectrum at this parameter point.
class UnstableSpectrum : public Error {
 public:
  explicit UnstableSpectrum(const std::string& msg) : Error(msg) {}
};

/// A thermal state was requested where the Hamiltonian is not bounded below
/// (T > 0 outside the positive-definite sector).
class ThermalUndefined : public Error {
 public:
  explicit ThermalUndefined(const std::string& msg) : Error(msg) {}
};

/// A quantity came out outside its physical domain (negative occupation,
/// uncertainty product below the minimum, complex PPT eigenvalue, ...).
class NonPhysical : public Error {
 public:
  explicit NonPhysical(const std::string& msg) : Error(msg) {}
};

/// A closed-form evaluation was requested outside the sectors where it is
/// defined (unstable, degenerate or free-mode points).
class OutOfSector : public Error {
 public:
  explicit OutOfSector(const std::string& msg) : Error(msg) {}
};

/// An iterative routine (root bracketing, cutoff convergence) failed to
/// reach its tolerance.
class ConvergenceFailure : public Error {
 public:
  explicit ConvergenceFailure(const std::string& msg) : Error(msg) {}
};

/// A sweep/grid/CLI specification is malformed (bad range, empty output
/// set, undefined boundary request, ...).
class SpecInvalid : public Error {
 public:
  explicit SpecInvalid(const std::string& msg) : Error(msg) {}
};

}  // namespace gaussmode
