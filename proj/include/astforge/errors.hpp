#pragma once

#include <stdexcept>
#include <string>

namespace astforge {

// Bad user-supplied configuration or input file. CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller violated an API contract (wrong sizes, bad indices, empty input).
struct InterfaceError : std::logic_error {
  using std::logic_error::logic_error;
};

// A value is outside the mathematical domain of an operation.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace astforge
