#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace largeness {

// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Axiom { Diagonal, Symmetry, Triangle, NonNegative, Finite };

const char* axiom_name(Axiom axiom);

// A metric axiom failed. The witness holds the offending indices; for the
// triangle case it is (i, j, k) with d(i,j) > d(i,k) + d(k,j).
class AxiomViolation : public Error {
 public:
  AxiomViolation(Axiom axiom, std::array<std::uint64_t, 3> witness, double gap);

  Axiom axiom() const { return axiom_; }
  const std::array<std::uint64_t, 3>& witness() const { return witness_; }
  double gap() const { return gap_; }

 private:
  Axiom axiom_;
  std::array<std::uint64_t, 3> witness_;
  double gap_;
};

class SizeLimit : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ParameterDomain : public DomainError {
 public:
  using DomainError::DomainError;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class DegenerateProfile : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class MassMismatch : public Error {
 public:
  using Error::Error;
};

class EmptySupport : public Error {
 public:
  using Error::Error;
};

class NotMultiple : public Error {
 public:
  using Error::Error;
};

class NotSummable : public Error {
 public:
  using Error::Error;
};

class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace largeness
