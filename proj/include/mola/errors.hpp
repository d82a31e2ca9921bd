#pragma once

#include <stdexcept>
#include <string>

namespace mola {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value is outside its admissible range (d = 0, sigma_min > sigma_max, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical routine failed (non-convergence, non-finite values).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Text input (config, game file, eigenvalue list, CSV) could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A file or directory could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mola
