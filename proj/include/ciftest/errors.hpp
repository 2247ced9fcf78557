#pragma once

#include <stdexcept>
#include <string>

namespace ciftest {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid input data: malformed records, empty groups, bad codes.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Invalid flags, configuration files, or file formats.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// A computation cannot proceed: singular adjustment factor, zero
// bootstrap variance, and similar.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

}  // namespace ciftest
