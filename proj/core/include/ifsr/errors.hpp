#pragma once

#include <stdexcept>
#include <string>

namespace ifsr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad sizes, indices, files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A map evaluation produced a non-finite value.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A simulated orbit left the bounded region.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Input carries no information for the requested estimate (e.g. constant series).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// The data does not have the structure the caller asked for
/// (e.g. fewer graph components than requested regimes).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant was violated.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace ifsr
