#pragma once

#include <stdexcept>
#include <string>

namespace roughwave {

// A computation ran but could not deliver a trustworthy number.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The quantity being measured is below the accuracy the solver can certify.
class ScaleOutOfReach : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace roughwave
