#pragma once

#include <stdexcept>
#include <string>

namespace dqlstm {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Requested size outside the supported range (e.g. qubit count).
class SizeError : public Error {
  public:
    using Error::Error;
};

// Qubit or element index out of range.
class IndexError : public Error {
  public:
    using Error::Error;
};

// Inconsistent shapes, flags or configuration values.
class ConfigError : public Error {
  public:
    using Error::Error;
};

// NaN/Inf where a finite number is required.
class NumericError : public Error {
  public:
    using Error::Error;
};

// Min-max scaling impossible (constant series).
class ScalingError : public Error {
  public:
    using Error::Error;
};

// Series generator diverged.
class GenerationError : public Error {
  public:
    using Error::Error;
};

}  // namespace dqlstm
