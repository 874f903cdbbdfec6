#pragma once

#include <string>
#include <vector>

#include "oeem/constants.hpp"
#include "oeem/g_tensor.hpp"
#include "oeem/geometry.hpp"
#include "oeem/site_catalog.hpp"

namespace oeem {

/// Zeeman eigenstate of the addressed Kramers doublet: `down` is the
/// lower-energy eigenstate of the effective spin Hamiltonian
/// H = mu_B * B . g . S, `up` the higher one.
enum class SpinBranch { down, up };

inline const char* to_string(SpinBranch b) { return b == SpinBranch::down ? "down" : "up"; }

/// Default validity threshold: the model assumes the erbium quantization
/// axis is set by the bias field, which holds above a few millitesla.
inline constexpr double kZeroFieldThresholdTesla = 1e-3;

/// Spin expectation value <S> of the chosen eigenstate; |<S>| = 1/2.
/// Throws ZeroFieldError below the threshold.
Vec3 spin_expectation(const Mat3& g, const Vec3& b_ext, SpinBranch branch,
                      const PhysicalConstants& pc = {},
                      double zero_field_threshold = kZeroFieldThresholdTesla);

/// Electronic dipole moment <mu> = -mu_B * g * <S>, in J/T.
Vec3 er_moment(const Mat3& g, const Vec3& b_ext, SpinBranch branch,
               const PhysicalConstants& pc = {},
               double zero_field_threshold = kZeroFieldThresholdTesla);

/// Point-dipole field of moment `moment` (J/T) at displacement `r` (m),
/// in tesla. Throws ZeroDistanceError for |r| = 0.
Vec3 dipolar_field(const Vec3& moment, const Vec3& r, const PhysicalConstants& pc = {});

/// rho = 1 - (cos angle)^2 between the two total fields. Depends only on
/// the directions: symmetric in its arguments and invariant under positive
/// rescaling of either. 1 for orthogonal fields, 0 for (anti-)collinear.
double branching_contrast(const Vec3& b_tot_g, const Vec3& b_tot_e);

/// Per-site superhyperfine coupling quantities at one bias field.
struct SpinCoupling {
  std::string site_label;
  SpinBranch branch = SpinBranch::down;
  Vec3 b_ext = Vec3::Zero();    // applied bias field, T
  Vec3 b_er_g = Vec3::Zero();   // erbium dipolar field at the site, ground state, T
  Vec3 b_er_e = Vec3::Zero();   // same for the optically excited state, T
  Vec3 b_tot_g = Vec3::Zero();  // b_ext + b_er_g, T
  Vec3 b_tot_e = Vec3::Zero();
  double delta_g = 0.0;  // nuclear splitting with Er in the ground state, Hz
  double delta_e = 0.0;  // Hz
  double rho = 0.0;      // branching contrast, 4 p (1-p)
  double p = 0.0;        // branching fraction, root with p <= 1/2
  double a_g = 0.0;      // coupling magnitude from the Er field alone, Hz
  double a_e = 0.0;      // Hz
};

/// Computes the full coupling record for one site:
///   - total fields seen by the nucleus for Er ground/excited states,
///   - splittings delta = |g_Y| mu_N |B_tot| / h,
///   - branching contrast rho = 1 - (cos angle between the totals)^2,
///   - coupling magnitudes |A| from the erbium field alone.
SpinCoupling site_coupling(const YttriumSite& site, const GTensorPair& tensors, const Vec3& b_ext,
                           SpinBranch branch, const PhysicalConstants& pc = {},
                           double zero_field_threshold = kZeroFieldThresholdTesla);

/// Erbium-field components relative to the bias direction.
struct FieldComponents {
  double b_par_g = 0.0;   // signed, T
  double b_perp_g = 0.0;  // >= 0, T
  double b_par_e = 0.0;
  double b_perp_e = 0.0;
};

/// Decomposes the stored erbium dipolar fields into components parallel and
/// orthogonal to the bias direction. The parallel part is reported in the
/// sign convention of the hyperbolic line-position parametrization
/// delta(B) ~ sqrt(b_perp^2 + (b_par + B)^2): b_par = -B_er . n. With this
/// convention the splitting minimum of the stored branch lies at bias
/// +b_par along n, and the values match published component tables.
FieldComponents field_components(const SpinCoupling& coupling, const Vec3& bias_direction);

/// Everything needed to evaluate couplings: constants, class-I geometry and
/// tensors, and the validity threshold. Immutable once built; cheap to copy.
struct SpinSystem {
  PhysicalConstants constants;
  std::vector<YttriumSite> sites;
  GTensorPair tensors;
  double zero_field_threshold = kZeroFieldThresholdTesla;

  /// C2(b) image: transforms both geometry and tensors. Class I returns
  /// the system unchanged.
  SpinSystem for_class(MagneticClass c) const;

  /// Couplings for every site at one field, in catalog order.
  std::vector<SpinCoupling> couplings(const Vec3& b_ext, SpinBranch branch) const;
};

}  // namespace oeem
