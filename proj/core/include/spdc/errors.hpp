#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

// Invalid or inconsistent run configuration (bad schema, unknown keys,
// parameters that violate resolution requirements). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure during a simulation or fit (non-finite data, fit did not
// converge, grid cannot contain the distribution). Maps to CLI exit code 3.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spdc
