#pragma once

#include <string>
#include <vector>

#include "oeem/spin_model.hpp"

namespace oeem {

struct GridSpec {
  double angular_step_deg = 10.0;  // hemisphere sampling
  int n_magnitude_steps = 40;      // log-spaced steps per field sign
  bool refine = true;              // local refinement after the grid pass
};

/// Search region for bias-field optimization. The lower magnitude bound
/// must stay at or above the model validity threshold: near zero field the
/// many weakly coupled distant spins make the signal collapse, so that
/// regime is excluded from optimization.
struct FieldSearchSpace {
  enum class Direction { free_sphere, fixed_axis };
  Direction constraint = Direction::free_sphere;
  Vec3 axis = b_axis();  // used for fixed_axis
  double b_min = 1e-3;   // tesla
  double b_max = 1.0;    // tesla
  GridSpec grid;

  void validate(double zero_field_threshold) const;
};

struct ProminenceResult {
  std::string site_label;
  double lambda = 0.0;
  Vec3 best_field = Vec3::Zero();  // tesla
  double rho_at_best = 0.0;
  std::vector<double> all_rho;  // every catalog site at the best field
};

/// Spin prominence lambda_i = rho_i / sum_{j != i} rho_j. Returns +inf
/// when the denominator is exactly zero (isolated-spin sentinel).
double prominence(std::size_t site_index, const std::vector<SpinCoupling>& couplings);
double prominence(std::size_t site_index, const std::vector<double>& rho);

/// Branching contrast of every catalog site at one field.
std::vector<double> rho_vector(const SpinSystem& system, const Vec3& field, SpinBranch branch);

/// Coarse grid search over the space followed by deterministic
/// coordinate-wise golden-section refinement (0.1 deg / 0.1 mT). Grid
/// points are evaluated in parallel; the reduction is order-independent.
ProminenceResult maximize_prominence(const SpinSystem& system, std::size_t site_index,
                                     const FieldSearchSpace& space,
                                     SpinBranch branch = SpinBranch::down);

/// Single-threaded reference implementation; must return the same result.
ProminenceResult maximize_prominence_serial(const SpinSystem& system, std::size_t site_index,
                                            const FieldSearchSpace& space,
                                            SpinBranch branch = SpinBranch::down);

/// Maximum branching contrast of one site over signed field magnitudes
/// along a fixed axis (log grid plus golden-section refinement).
double rho_max_scan(const SpinSystem& system, std::size_t site_index, const Vec3& axis,
                    double b_min, double b_max, SpinBranch branch = SpinBranch::down,
                    int n_steps = 40, bool refine = true);

}  // namespace oeem
