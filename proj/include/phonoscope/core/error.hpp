#pragma once

#include <stdexcept>
#include <string>

namespace phonoscope {

/** Base class for every error raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** Bad or inconsistent input: wrong shapes, out-of-range parameters, malformed files. */
class ValidationError : public Error {
 public:
  using Error::Error;
};

/** Argument outside the mathematical domain of a function. */
class DomainError : public Error {
 public:
  using Error::Error;
};

/** An iterative or adaptive algorithm failed to reach its tolerance. */
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace phonoscope
