#include "oeem/spin_model.hpp"

#include <cmath>
#include <numbers>

#include "oeem/errors.hpp"

namespace oeem {

Vec3 spin_expectation(const Mat3& g, const Vec3& b_ext, SpinBranch branch,
                      const PhysicalConstants& pc, double zero_field_threshold) {
  (void)pc;  // the eigenstate direction does not depend on the field scale
  if (!(b_ext.norm() >= zero_field_threshold)) {
    throw ZeroFieldError("bias field below validity threshold (" +
                         std::to_string(zero_field_threshold * 1e3) + " mT)");
  }
  // H = mu_B B.g.S = (mu_B/2) w.sigma with w = g^T B; the lower eigenstate
  // carries <S> = -w/(2|w|).
  const Vec3 w = g.transpose() * b_ext;
  const Vec3 n = w.normalized();
  return branch == SpinBranch::down ? Vec3(-0.5 * n) : Vec3(0.5 * n);
}

Vec3 er_moment(const Mat3& g, const Vec3& b_ext, SpinBranch branch, const PhysicalConstants& pc,
               double zero_field_threshold) {
  return -pc.mu_B * (g * spin_expectation(g, b_ext, branch, pc, zero_field_threshold));
}

Vec3 dipolar_field(const Vec3& moment, const Vec3& r, const PhysicalConstants& pc) {
  const double rn = r.norm();
  if (rn == 0.0) throw ZeroDistanceError("dipolar field evaluated at zero displacement");
  const double r3 = rn * rn * rn;
  const double r5 = r3 * rn * rn;
  return -(pc.mu_0 / (4.0 * std::numbers::pi)) * (moment / r3 - 3.0 * moment.dot(r) * r / r5);
}

double branching_contrast(const Vec3& b_tot_g, const Vec3& b_tot_e) {
  // ratio form: exact zero for bitwise-identical (hence collinear) inputs
  const double dot = b_tot_g.dot(b_tot_e);
  const double denom = b_tot_g.squaredNorm() * b_tot_e.squaredNorm();
  return std::max(0.0, std::min(1.0, 1.0 - dot * dot / denom));
}

SpinCoupling site_coupling(const YttriumSite& site, const GTensorPair& tensors, const Vec3& b_ext,
                           SpinBranch branch, const PhysicalConstants& pc,
                           double zero_field_threshold) {
  SpinCoupling c;
  c.site_label = site.label;
  c.branch = branch;
  c.b_ext = b_ext;
  c.b_er_g = dipolar_field(er_moment(tensors.g_ground, b_ext, branch, pc, zero_field_threshold),
                           site.position, pc);
  c.b_er_e = dipolar_field(er_moment(tensors.g_excited, b_ext, branch, pc, zero_field_threshold),
                           site.position, pc);
  c.b_tot_g = b_ext + c.b_er_g;
  c.b_tot_e = b_ext + c.b_er_e;

  const double gamma = pc.yttrium_gamma_hz_per_tesla();
  c.delta_g = gamma * c.b_tot_g.norm();
  c.delta_e = gamma * c.b_tot_e.norm();
  c.a_g = gamma * c.b_er_g.norm();
  c.a_e = gamma * c.b_er_e.norm();

  c.rho = branching_contrast(c.b_tot_g, c.b_tot_e);
  c.p = 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - c.rho)));
  return c;
}

FieldComponents field_components(const SpinCoupling& coupling, const Vec3& bias_direction) {
  const Vec3 n = bias_direction.normalized();
  FieldComponents f;
  const double proj_g = coupling.b_er_g.dot(n);
  const double proj_e = coupling.b_er_e.dot(n);
  f.b_par_g = -proj_g;
  f.b_par_e = -proj_e;
  f.b_perp_g = (coupling.b_er_g - proj_g * n).norm();
  f.b_perp_e = (coupling.b_er_e - proj_e * n).norm();
  return f;
}

SpinSystem SpinSystem::for_class(MagneticClass c) const {
  if (c == MagneticClass::I) return *this;
  SpinSystem out = *this;
  for (auto& s : out.sites) s.position = class_transform(s.position, c);
  out.tensors.g_ground = class_transform(tensors.g_ground, c);
  out.tensors.g_excited = class_transform(tensors.g_excited, c);
  return out;
}

std::vector<SpinCoupling> SpinSystem::couplings(const Vec3& b_ext, SpinBranch branch) const {
  std::vector<SpinCoupling> out;
  out.reserve(sites.size());
  for (const auto& s : sites) {
    out.push_back(site_coupling(s, tensors, b_ext, branch, constants, zero_field_threshold));
  }
  return out;
}

}  // namespace oeem
