#pragma once

#include <stdexcept>
#include <string>

namespace fdcam {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid caller input: bad shapes, out-of-range indices, unreadable or
// malformed files. The CLI maps this to exit code 2.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what) {}
};

// Invalid configuration, e.g. an unknown target layer id.
class ConfigError : public InputError {
 public:
  explicit ConfigError(const std::string& what) : InputError(what) {}
};

// Non-finite values or other numeric breakdown. The CLI maps this to exit
// code 3.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(what) {}
};

}  // namespace fdcam
