#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace oeem::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform double in (0, 1].
inline double to_unit(std::uint64_t u) {
  return (static_cast<double>(u >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard normal draw addressed purely by (seed, index): parallel and
/// serial evaluation orders produce bit-identical streams.
inline double gaussian_at(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t base = splitmix64(seed ^ splitmix64(index));
  const double u1 = to_unit(base);
  const double u2 = to_unit(splitmix64(base));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace oeem::rng
