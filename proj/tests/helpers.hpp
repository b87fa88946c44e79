#pragma once

#include <cmath>
#include <random>

namespace testutil {

inline bool rel_close(double a, double b, double tol) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= tol * scale;
}

inline bool abs_close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// fixed-seed generator so failures reproduce
inline std::mt19937_64 rng(unsigned salt = 0) { return std::mt19937_64(0x5eed00d5 + salt); }

}  // namespace testutil
