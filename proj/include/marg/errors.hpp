#pragma once

#include <stdexcept>
#include <string>

namespace marg {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration value.
class ArgError : public Error {
 public:
  using Error::Error;
};

/// Requested point set exceeds the built-in memory budget or overflows.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Target function produced a non-finite value.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// A partition bin received no points.
class EmptyBinError : public Error {
 public:
  using Error::Error;
};

}  // namespace marg
