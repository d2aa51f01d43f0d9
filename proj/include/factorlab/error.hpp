#pragma once

#include <stdexcept>
#include <string>

namespace factorlab {

// Bad or inconsistent input: unparsable files, missing columns, bad config.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The numbers themselves failed: rank deficiency, divergence, non-finite values.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace factorlab
