#include "oeem/prominence.hpp"

#include <cmath>
#include <limits>

#include "oeem/errors.hpp"

namespace oeem {

void FieldSearchSpace::validate(double zero_field_threshold) const {
  if (!(b_min >= zero_field_threshold)) {
    throw ConfigError("search magnitude lower bound must respect the zero-field threshold");
  }
  if (!(b_max >= b_min)) throw ConfigError("empty magnitude range");
  if (!(grid.angular_step_deg > 0.0) || grid.n_magnitude_steps < 1) {
    throw ConfigError("bad grid specification");
  }
}

double prominence(std::size_t site_index, const std::vector<double>& rho) {
  double denom = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j) {
    if (j != site_index) denom += rho[j];
  }
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return rho[site_index] / denom;
}

double prominence(std::size_t site_index, const std::vector<SpinCoupling>& couplings) {
  std::vector<double> rho;
  rho.reserve(couplings.size());
  for (const auto& c : couplings) rho.push_back(c.rho);
  return prominence(site_index, rho);
}

std::vector<double> rho_vector(const SpinSystem& system, const Vec3& field, SpinBranch branch) {
  std::vector<double> out;
  out.reserve(system.sites.size());
  for (const auto& s : system.sites) {
    out.push_back(
        site_coupling(s, system.tensors, field, branch, system.constants, system.zero_field_threshold)
            .rho);
  }
  return out;
}

namespace {

struct GridPoint {
  double polar_deg;
  double azimuth_deg;
  double magnitude;  // signed tesla
};

// keeps log/exp round-trip and unit-vector rounding from dipping below the
// validity bound
double clamp_magnitude(double m, const FieldSearchSpace& space) {
  const double lo = std::min(space.b_min * (1.0 + 1e-12), space.b_max);
  const double a = std::clamp(std::abs(m), lo, space.b_max);
  return m >= 0.0 ? a : -a;
}

Vec3 field_of(const FieldSearchSpace& space, const GridPoint& g) {
  const double m = clamp_magnitude(g.magnitude, space);
  if (space.constraint == FieldSearchSpace::Direction::fixed_axis) {
    return m * space.axis.normalized();
  }
  return m * spherical_direction(g.polar_deg, g.azimuth_deg);
}

std::vector<GridPoint> build_grid(const FieldSearchSpace& space) {
  std::vector<double> mags;
  const int n = space.grid.n_magnitude_steps;
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    const double m =
        std::clamp(space.b_min * std::pow(space.b_max / space.b_min, t), space.b_min, space.b_max);
    mags.push_back(m);
    mags.push_back(-m);
  }
  std::vector<GridPoint> pts;
  if (space.constraint == FieldSearchSpace::Direction::fixed_axis) {
    for (double m : mags) pts.push_back({0.0, 0.0, m});
    return pts;
  }
  // hemisphere: the contrast is even in the field, so direction sign is redundant
  const double step = space.grid.angular_step_deg;
  for (double polar = 0.0; polar <= 90.0 + 1e-9; polar += step) {
    if (polar < 1e-12) {
      for (double m : mags) pts.push_back({0.0, 0.0, m});
      continue;
    }
    for (double az = 0.0; az < 360.0 - 1e-9; az += step) {
      for (double m : mags) pts.push_back({polar, std::min(az, 360.0), m});
    }
  }
  return pts;
}

double lambda_at(const SpinSystem& system, std::size_t site_index, const Vec3& field,
                 SpinBranch branch) {
  return prominence(site_index, rho_vector(system, field, branch));
}

// golden-section maximization of f over [lo, hi] down to width `tol`
template <typename F>
double golden_max(F&& f, double lo, double hi, double tol, double* best_x) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (lo + hi);
  const double fm = f(xm);
  *best_x = fm >= std::max(f1, f2) ? xm : (f1 > f2 ? x1 : x2);
  return std::max({fm, f1, f2});
}

GridPoint refine_point(const SpinSystem& system, std::size_t site_index,
                       const FieldSearchSpace& space, SpinBranch branch, GridPoint best) {
  const double sign = best.magnitude >= 0.0 ? 1.0 : -1.0;
  const double ang_tol = 0.1;
  const double mag_tol = 1e-4;  // 0.1 mT

  for (int sweep = 0; sweep < 3; ++sweep) {
    if (space.constraint == FieldSearchSpace::Direction::free_sphere) {
      auto f_polar = [&](double p) {
        GridPoint g = best;
        g.polar_deg = p;
        return lambda_at(system, site_index, field_of(space, g), branch);
      };
      double p_best;
      golden_max(f_polar, std::max(0.0, best.polar_deg - space.grid.angular_step_deg),
                 std::min(180.0, best.polar_deg + space.grid.angular_step_deg), ang_tol, &p_best);
      best.polar_deg = p_best;

      auto f_az = [&](double a) {
        GridPoint g = best;
        g.azimuth_deg = a;
        return lambda_at(system, site_index, field_of(space, g), branch);
      };
      double a_best;
      golden_max(f_az, best.azimuth_deg - space.grid.angular_step_deg,
                 best.azimuth_deg + space.grid.angular_step_deg, ang_tol, &a_best);
      best.azimuth_deg = a_best;
    }

    auto f_mag = [&](double lnm) {
      GridPoint g = best;
      g.magnitude = sign * std::exp(lnm);
      return lambda_at(system, site_index, field_of(space, g), branch);
    };
    const double ln_lo = std::log(std::max(space.b_min, std::abs(best.magnitude) / 1.3));
    const double ln_hi = std::log(std::min(space.b_max, std::abs(best.magnitude) * 1.3));
    double ln_best;
    golden_max(f_mag, ln_lo, ln_hi, mag_tol / std::abs(best.magnitude), &ln_best);
    best.magnitude = sign * std::exp(ln_best);
  }
  return best;
}

ProminenceResult run_maximize(const SpinSystem& system, std::size_t site_index,
                              const FieldSearchSpace& space, SpinBranch branch, bool parallel) {
  space.validate(system.zero_field_threshold);
  if (site_index >= system.sites.size()) throw ConfigError("site index out of range");

  const auto grid = build_grid(space);
  std::vector<double> lambdas(grid.size());
  const std::int64_t n = static_cast<std::int64_t>(grid.size());
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      lambdas[i] = lambda_at(system, site_index, field_of(space, grid[i]), branch);
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      lambdas[i] = lambda_at(system, site_index, field_of(space, grid[i]), branch);
    }
  }

  // deterministic argmax: value first, lower index breaks ties
  std::size_t best_idx = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (lambdas[i] > lambdas[best_idx]) best_idx = i;
  }

  GridPoint best = grid[best_idx];
  double best_lambda = lambdas[best_idx];
  if (space.grid.refine && std::isfinite(best_lambda)) {
    const GridPoint refined = refine_point(system, site_index, space, branch, best);
    const double refined_lambda =
        lambda_at(system, site_index, field_of(space, refined), branch);
    if (refined_lambda >= best_lambda) {
      best = refined;
      best_lambda = refined_lambda;
    }
  }

  ProminenceResult out;
  out.site_label = system.sites[site_index].label;
  out.lambda = best_lambda;
  out.best_field = field_of(space, best);
  out.all_rho = rho_vector(system, out.best_field, branch);
  out.rho_at_best = out.all_rho[site_index];
  return out;
}

}  // namespace

ProminenceResult maximize_prominence(const SpinSystem& system, std::size_t site_index,
                                     const FieldSearchSpace& space, SpinBranch branch) {
  return run_maximize(system, site_index, space, branch, true);
}

ProminenceResult maximize_prominence_serial(const SpinSystem& system, std::size_t site_index,
                                            const FieldSearchSpace& space, SpinBranch branch) {
  return run_maximize(system, site_index, space, branch, false);
}

double rho_max_scan(const SpinSystem& system, std::size_t site_index, const Vec3& axis,
                    double b_min, double b_max, SpinBranch branch, int n_steps, bool refine) {
  if (!(b_min > 0.0) || !(b_max >= b_min)) throw ConfigError("bad magnitude range");
  if (site_index >= system.sites.size()) throw ConfigError("site index out of range");
  const Vec3 n = axis.normalized();

  const double m_lo = std::min(b_min * (1.0 + 1e-12), b_max);
  auto rho_at = [&](double m) {
    const double a = std::clamp(std::abs(m), m_lo, b_max);
    return site_coupling(system.sites[site_index], system.tensors, (m >= 0.0 ? a : -a) * n, branch,
                         system.constants, system.zero_field_threshold)
        .rho;
  };

  double best = 0.0;
  for (double sign : {1.0, -1.0}) {
    double best_m = sign * b_min;
    double best_rho = -1.0;
    for (int i = 0; i < n_steps; ++i) {
      const double t = n_steps == 1 ? 0.0 : static_cast<double>(i) / (n_steps - 1);
      const double m = sign * b_min * std::pow(b_max / b_min, t);
      const double r = rho_at(m);
      if (r > best_rho) {
        best_rho = r;
        best_m = m;
      }
    }
    if (refine) {
      const double lo = std::log(std::max(b_min, std::abs(best_m) / 1.5));
      const double hi = std::log(std::min(b_max, std::abs(best_m) * 1.5));
      constexpr double mag_tol = 1e-4;
      auto f = [&](double lnm) { return rho_at(sign * std::exp(lnm)); };
      double ln_best;
      best_rho = std::max(best_rho, golden_max(f, lo, hi, mag_tol / std::abs(best_m), &ln_best));
    }
    best = std::max(best, best_rho);
  }
  return best;
}

}  // namespace oeem
