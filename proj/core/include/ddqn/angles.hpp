#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ddqn {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle to the half-open interval (-pi, pi].
inline double wrap_angle(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("wrap_angle: non-finite input");
  double w = std::remainder(x, kTwoPi);  // lands in [-pi, pi]
  if (w <= -kPi) w = kPi;
  return w;
}

}  // namespace ddqn
