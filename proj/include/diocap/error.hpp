#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace diocap {

// Every failure the library reports derives from Error so callers (the CLI in
// particular) can map a whole family of conditions onto one exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Interval for a Gauss-map argument straddles a reciprocal-integer boundary.
class AmbiguousDigit : public Error {
 public:
  using Error::Error;
};

// Continued-fraction expansion terminated: the input is rational.
class RationalInput : public DomainError {
 public:
  using DomainError::DomainError;
};

class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

// An inequality could not be decided at the current interval width.
class Undecidable : public Error {
 public:
  Undecidable(std::size_t index, const std::string& what)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class InsufficientTable : public Error {
 public:
  using Error::Error;
};

class OverflowEvenInLogSpace : public Error {
 public:
  using Error::Error;
};

class IncompatibleClamp : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace diocap
