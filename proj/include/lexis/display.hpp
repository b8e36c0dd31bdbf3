#pragma once

#include <cmath>
#include <string>

#include <fmt/format.h>

namespace lexis {

// Rounds half away from zero to `decimals` places. The tolerance absorbs
// binary representation error so 2.675 rounds to 2.68; rounding is
// sign-symmetric, so display(-x) == -display(x).
inline double round_display(double x, int decimals = 2) {
  const double scale = std::pow(10.0, decimals);
  const double scaled = std::fabs(x) * scale;
  const double r = std::floor(scaled + 0.5 + 1e-9 * std::max(1.0, scaled)) / scale;
  return std::signbit(x) ? -r : r;
}

inline std::string fixed2(double x) {
  const double r = round_display(x);
  return fmt::format("{:.2f}", r == 0.0 ? 0.0 : r);
}

}  // namespace lexis
