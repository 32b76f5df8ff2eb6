#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace phononbus {

namespace detail {
// Compact scientific formatting for diagnostics.
inline std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}
}  // namespace detail

// Bad physical or numerical input: wrong dimensions, mismatched spaces,
// out-of-range parameters.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numerical contract was violated while running: norm drift beyond
// tolerance, truncation leakage, under-resolved time grid, a solver that
// failed to converge.  The CLI maps this to exit code 3.
struct NumericalContract : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed run configuration.  The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace phononbus
