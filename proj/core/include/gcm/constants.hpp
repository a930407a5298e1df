#pragma once

#include <cmath>

namespace gcm {

inline constexpr double kBoltzmann = 1.380649e-23;         // J/K
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C

inline double thermal_voltage(double temp_kelvin) {
  return kBoltzmann * temp_kelvin / kElementaryCharge;
}

// Overflow-safe ln(1 + e^y).
inline double softplus(double y) {
  if (y > 0.0) return y + std::log1p(std::exp(-y));
  return std::log1p(std::exp(y));
}

}  // namespace gcm
