#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace porocell {

/// Error with a module-qualified message ("biot: negative root ...").
class Error : public std::runtime_error {
 public:
  Error(const std::string& module, const std::string& what)
      : std::runtime_error(module + ": " + what) {}
};

namespace units {
constexpr double kPa = 1.0;
constexpr double kGPa = 1e9;
constexpr double kGramPerCm3 = 1000.0;  // -> kg/m^3
constexpr double kMm = 1e-3;            // -> m
constexpr double kUm = 1e-6;            // -> m
constexpr double kUs = 1e-6;            // -> s
constexpr double kKHz = 1e3;            // -> Hz
}  // namespace units

/// Format with 6 significant digits; every emitted number goes through this
/// so that golden-file comparisons stay stable.
inline std::string format_sig(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

/// Round a value to 6 significant digits (used before JSON emission).
inline double round_sig(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return std::strtod(buf, nullptr);
}

}  // namespace porocell
