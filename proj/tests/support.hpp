#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

inline std::mt19937& rng() {
  static std::mt19937 gen(0x5eed1234u);
  return gen;
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

inline bool close_abs(double a, double b, double abs_tol) { return std::abs(a - b) <= abs_tol; }

/// Unique scratch path under the build tree.
inline std::string scratch_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "porocell_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace testsupport
