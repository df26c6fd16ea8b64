#pragma once

#include <cmath>
#include <numbers>

namespace mrcl {

/// Wraps an angle to the half-open interval (-pi, pi]. Both +pi and -pi map to +pi.
template <typename T>
T wrap_angle(T a) {
  constexpr T two_pi = T(2) * std::numbers::pi_v<T>;
  T r = std::fmod(a + std::numbers::pi_v<T>, two_pi);
  if (r <= T(0)) r += two_pi;
  return r - std::numbers::pi_v<T>;
}

}  // namespace mrcl
