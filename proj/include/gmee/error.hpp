#pragma once

#include <stdexcept>
#include <string>

namespace gmee {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric parameter is outside its admissible range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// An input collection is empty or otherwise unusable.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Window-based gradient requested with fewer than two samples.
class InsufficientWindow : public Error {
 public:
  using Error::Error;
};

/// Two inputs that must describe the same population disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Unsupported or malformed file container (WAV).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace gmee
