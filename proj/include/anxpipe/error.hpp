#pragma once

#include <stdexcept>
#include <string>

namespace anxpipe {

/// Bad input data: malformed files, contract violations on values.
/// The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or type mismatch between tensors, configs or caches.
class ShapeError : public DataError {
 public:
  using DataError::DataError;
};

/// Misuse of the command line; exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace anxpipe
