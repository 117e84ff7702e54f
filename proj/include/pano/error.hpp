#pragma once

#include <stdexcept>
#include <string>

namespace pano {

// Bad user input: files, CLI values, out-of-range pixels, malformed configs.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public InputError {
 public:
  explicit ParseError(const std::string& msg) : InputError(msg) {}
};

// Numeric failure: out-of-frustum evaluation, non-finite objective, failed solve.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pano
