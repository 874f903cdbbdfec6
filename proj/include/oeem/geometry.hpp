#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace oeem {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Crystal frame: component 0 = D1, 1 = D2, 2 = b.
inline Vec3 d1_axis() { return {1.0, 0.0, 0.0}; }
inline Vec3 d2_axis() { return {0.0, 1.0, 0.0}; }
inline Vec3 b_axis() { return {0.0, 0.0, 1.0}; }

/// The two magnetically inequivalent dopant orientations, related by a
/// two-fold rotation about the crystal b-axis.
enum class MagneticClass { I, II };

inline const char* to_string(MagneticClass c) { return c == MagneticClass::I ? "I" : "II"; }

/// C2(b) image of a vector: class I is the identity, class II maps
/// (d1, d2, b) -> (-d1, -d2, b). Sign flips are exact in floating point,
/// so b-aligned quantities stay bit-identical between classes.
inline Vec3 class_transform(const Vec3& v, MagneticClass c) {
  if (c == MagneticClass::I) return v;
  return {-v.x(), -v.y(), v.z()};
}

/// Similarity transform R*T*R^T with R = diag(-1,-1,1); flips the
/// (0,2)/(1,2) blocks and leaves the rest untouched.
inline Mat3 class_transform(const Mat3& t, MagneticClass c) {
  if (c == MagneticClass::I) return t;
  Mat3 out = t;
  out(0, 2) = -t(0, 2);
  out(2, 0) = -t(2, 0);
  out(1, 2) = -t(1, 2);
  out(2, 1) = -t(2, 1);
  return out;
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Unit vector obtained by tilting `axis` by `polar_deg` toward an azimuth
/// measured in the plane orthogonal to the axis. Used to model bias-field
/// misalignment.
inline Vec3 tilted_direction(const Vec3& axis, double polar_deg, double azimuth_deg) {
  const Vec3 n = axis.normalized();
  // any stable completion of {n} to an orthonormal frame
  Vec3 seed = std::abs(n.z()) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
  const Vec3 u = (seed - seed.dot(n) * n).normalized();
  const Vec3 v = n.cross(u);
  const double p = deg_to_rad(polar_deg);
  const double a = deg_to_rad(azimuth_deg);
  if (polar_deg == 0.0) return n;
  return (std::cos(p) * n + std::sin(p) * (std::cos(a) * u + std::sin(a) * v)).normalized();
}

/// Direction on the unit sphere from polar angle (from +b) and azimuth
/// (from +D1 toward +D2), both in degrees.
inline Vec3 spherical_direction(double polar_deg, double azimuth_deg) {
  const double p = deg_to_rad(polar_deg);
  const double a = deg_to_rad(azimuth_deg);
  return {std::sin(p) * std::cos(a), std::sin(p) * std::sin(a), std::cos(p)};
}

}  // namespace oeem
