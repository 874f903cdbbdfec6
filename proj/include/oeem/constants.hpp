#pragma once

#include <cmath>

#include "oeem/errors.hpp"

namespace oeem {

/// Physical constants in SI units (CODATA 2018). The nuclear g-factor of
/// 89Y is the one tunable entry: chemical shifts make it slightly
/// site-dependent, so it can be overridden from configuration.
struct PhysicalConstants {
  double mu_N = 5.0507837461e-27;  // nuclear magneton, J/T
  double mu_B = 9.2740100783e-24;  // Bohr magneton, J/T
  double h = 6.62607015e-34;       // Planck constant, J*s
  double mu_0 = 1.25663706212e-6;  // vacuum permeability, T*m/A
  double g_Y = -0.2737;            // 89Y nuclear g-factor in YSO

  /// |g_Y|*mu_N/h in Hz/T; 2.0863 MHz/T for the default g_Y.
  double yttrium_gamma_hz_per_tesla() const { return std::abs(g_Y) * mu_N / h; }

  void validate() const {
    for (double v : {mu_N, mu_B, h, mu_0, g_Y}) {
      if (!std::isfinite(v) || v == 0.0) {
        throw ConfigError("physical constants must be finite and nonzero");
      }
    }
    const double ratio = mu_B / mu_N;
    if (std::abs(ratio / 1836.15267343 - 1.0) > 0.01) {
      throw ConfigError("mu_B/mu_N inconsistent with the electron/proton mass ratio");
    }
  }
};

inline constexpr double kAngstrom = 1e-10;  // meters

}  // namespace oeem
