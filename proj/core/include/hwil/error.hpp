#pragma once

#include <stdexcept>
#include <string>

namespace hwil {

/// Raised on violated preconditions and invalid configurations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested numerical tolerance cannot be met by the configured method.
class ToleranceError : public Error {
 public:
  using Error::Error;
};

}  // namespace hwil
