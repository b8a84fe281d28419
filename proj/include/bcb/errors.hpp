#pragma once

#include <stdexcept>
#include <string>

namespace bcb {

// Invalid instance/config/arguments: CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A policy or the environment broke a runtime contract (e.g. returned an
// unaffordable action): CLI maps this to exit code 3.
struct ContractViolation : std::logic_error {
  explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace bcb
