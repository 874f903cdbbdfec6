#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace oeem {

struct LinePoint {
  double b = 0.0;         // tesla, signed
  double freq = 0.0;      // Hz, >= 0
  double freq_err = 0.0;  // Hz, > 0
};

/// Field-dependent positions of one spectral branch.
struct LinePositionSeries {
  std::vector<LinePoint> points;
  std::string branch_label;

  void validate(int n_free_params) const;
};

/// Hyperbolic line position: |g_eff| * sqrt(b_perp^2 + (b_par + B)^2),
/// g_eff in Hz/T.
double eval_hyperbola(double b, double b_par, double b_perp, double g_eff);

struct HyperbolaFit {
  double b_par = 0.0;      // tesla, signed
  double b_perp = 0.0;     // tesla, folded >= 0
  double g_eff = 0.0;      // Hz/T; magnitude when fitted free
  bool g_fixed = false;
  Eigen::MatrixXd covariance;  // 2x2 (fixed g: b_par, b_perp) or 3x3 (+g)
  double residual_rms = 0.0;   // Hz, unweighted
  int n_points = 0;
  int vertex_candidates = 1;  // local minima seen in the series

  double b_par_err() const { return std::sqrt(covariance(0, 0)); }
  double b_perp_err() const { return std::sqrt(covariance(1, 1)); }
  double g_eff_err() const {
    return covariance.rows() > 2 ? std::sqrt(covariance(2, 2)) : 0.0;
  }
};

/// Weighted least squares of the hyperbola against a series. Residuals are
/// scaled by the per-point errors; `uniform_weights` ignores them and
/// instead scales the covariance by the reduced chi-square. Deterministic:
/// no randomness, initialization derived from the series itself.
/// Throws InsufficientDataError / FitFailureError.
HyperbolaFit fit_hyperbola(const LinePositionSeries& series,
                           std::optional<double> fix_g_hz_per_tesla = std::nullopt,
                           bool uniform_weights = false);

struct GyroFit {
  std::vector<HyperbolaFit> per_series;
  std::vector<double> g_signed;  // Hz/T, negative by convention
  double combined_g = 0.0;       // Hz/T, inverse-variance weighted, negative
  double combined_err = 0.0;     // Hz/T
};

/// Per-series 3-parameter fits followed by an inverse-variance combination
/// of the gyromagnetic ratios. The sign is assigned negative, following
/// the known sign of the 89Y nuclear moment.
GyroFit fit_gyromagnetic(const std::vector<LinePositionSeries>& series_set,
                         bool uniform_weights = false);

/// Free-ion 89Y gyromagnetic ratio and the electronic shielding factor
/// that relates it to the value in a solid host.
inline constexpr double kFreeIonGammaHzPerTesla = 2.0949e6;
inline constexpr double kYttriumShieldingFactor = 1.0041;

}  // namespace oeem
