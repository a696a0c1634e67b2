#pragma once

#include <stdexcept>
#include <string>

namespace echosim {

// Bad numeric argument to a physics or protocol primitive.
class InvalidParameterError : public std::invalid_argument {
 public:
  explicit InvalidParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Scenario rejected: syntax error, schema violation, or constraint violation.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// An operation requiring a key handle was attempted without owning one.
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace echosim
