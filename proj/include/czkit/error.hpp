#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace czkit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad ids, empty sets where a set is required, bad parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

/// lambda below the admissible threshold C*|f|_1/mu(M).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// No family set can play the role of Q_i for a selected stopping set.
class FamilyNotDoublingError : public Error {
 public:
  FamilyNotDoublingError(const std::string& what, std::size_t witness)
      : Error(what), witness_(witness) {}
  std::size_t witness() const { return witness_; }

 private:
  std::size_t witness_;
};

/// Generalized eigenvalues outside the window required for a doubling chain.
class GapError : public Error {
 public:
  GapError(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// A group product left the enumerated region of a group model.
class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace czkit
