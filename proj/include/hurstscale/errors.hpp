#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hurstscale {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad knobs: unsupported wavelet order, impossible scale range, bad segment length.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Structurally bad data handed to an operation (lengths, index ranges).
class InputError : public Error {
 public:
  using Error::Error;
};

// Parameter outside its mathematical domain (H outside (0,1), nonpositive envelope).
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

// Input whose content defeats the computation (constant series, all-zero details).
class DegenerateError : public InputError {
 public:
  using InputError::InputError;
};

// File-level problems; carries the 1-based row where parsing gave up.
class DataError : public Error {
 public:
  DataError(const std::string& msg, std::size_t row)
      : Error(msg + " (row " + std::to_string(row) + ")"), row_(row) {}
  explicit DataError(const std::string& msg) : Error(msg), row_(0) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// Linear algebra or spectral factorization failed beyond recovery.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Model fit did not converge.
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace hurstscale
