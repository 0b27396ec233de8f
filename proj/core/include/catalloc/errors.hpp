#pragma once

#include <stdexcept>
#include <string>

namespace catalloc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad bundle, non-permutation, partition violation, ...
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A request that exceeds a configured capacity or enumeration budget.
// Callers get a refusal instead of a degraded answer.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A mechanism run that cannot proceed (e.g. a scripted pick is unavailable).
class ExecutionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A witness construction failed its own replay check. Always a bug.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace catalloc
