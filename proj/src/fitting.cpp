#include "oeem/fitting.hpp"

#include <algorithm>
#include <cmath>

#include "levmar.hpp"
#include "oeem/errors.hpp"

namespace oeem {

void LinePositionSeries::validate(int n_free_params) const {
  if (static_cast<int>(points.size()) < n_free_params + 1) {
    throw InsufficientDataError(branch_label + ": " + std::to_string(points.size()) +
                                " points cannot constrain " + std::to_string(n_free_params) +
                                " parameters");
  }
  for (const auto& p : points) {
    if (!(p.freq >= 0.0)) throw ConfigError("line positions must be >= 0");
    if (!(p.freq_err > 0.0)) throw ConfigError("frequency errors must be > 0");
    if (!std::isfinite(p.b)) throw ConfigError("non-finite field value");
  }
}

double eval_hyperbola(double b, double b_par, double b_perp, double g_eff) {
  return std::abs(g_eff) * std::hypot(b_perp, b_par + b);
}

namespace {

int count_local_minima(const LinePositionSeries& s) {
  std::vector<LinePoint> pts = s.points;
  std::sort(pts.begin(), pts.end(), [](const LinePoint& a, const LinePoint& b) { return a.b < b.b; });
  int count = 0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    if (pts[i].freq < pts[i - 1].freq && pts[i].freq < pts[i + 1].freq) ++count;
  }
  return std::max(count, 1);
}

}  // namespace

HyperbolaFit fit_hyperbola(const LinePositionSeries& series, std::optional<double> fix_g,
                           bool uniform_weights) {
  const bool free_g = !fix_g.has_value();
  const int n_params = free_g ? 3 : 2;
  series.validate(n_params);
  const auto& pts = series.points;
  const int n = static_cast<int>(pts.size());

  // vertex-based initialization
  int k_min = 0;
  for (int i = 1; i < n; ++i) {
    if (pts[i].freq < pts[k_min].freq) k_min = i;
  }
  double a0;
  if (free_g) {
    // asymptotic slope estimate from the point farthest from the vertex
    int k_far = 0;
    for (int i = 1; i < n; ++i) {
      if (std::abs(pts[i].b - pts[k_min].b) > std::abs(pts[k_far].b - pts[k_min].b)) k_far = i;
    }
    const double span = std::abs(pts[k_far].b - pts[k_min].b);
    a0 = span > 0.0 ? std::abs(pts[k_far].freq - pts[k_min].freq) / span : 2e6;
    if (!(a0 > 0.0)) a0 = 2e6;
  } else {
    a0 = std::abs(*fix_g);
    if (!(a0 > 0.0)) throw ConfigError("fixed gyromagnetic ratio must be nonzero");
  }
  const double b_par0 = -pts[k_min].b;
  const double b_perp0 = std::max(pts[k_min].freq / a0, 1e-6);

  auto resid = [&](const Eigen::VectorXd& p) {
    const double bp = p(0);
    const double bq = p(1);
    const double a = free_g ? p(2) : a0;
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) {
      const double wt = uniform_weights ? 1.0 : 1.0 / pts[i].freq_err;
      r(i) = (a * std::hypot(bq, bp + pts[i].b) - pts[i].freq) * wt;
    }
    return r;
  };
  auto jac = [&](const Eigen::VectorXd& p) {
    const double bp = p(0);
    const double bq = p(1);
    const double a = free_g ? p(2) : a0;
    Eigen::MatrixXd j(n, n_params);
    for (int i = 0; i < n; ++i) {
      const double root = std::hypot(bq, bp + pts[i].b);
      const double wt = uniform_weights ? 1.0 : 1.0 / pts[i].freq_err;
      const double safe = std::max(root, 1e-300);
      j(i, 0) = a * (bp + pts[i].b) / safe * wt;
      j(i, 1) = a * bq / safe * wt;
      if (free_g) j(i, 2) = root * wt;
    }
    return j;
  };

  Eigen::VectorXd p0(n_params);
  if (free_g) {
    p0 << b_par0, b_perp0, a0;
  } else {
    p0 << b_par0, b_perp0;
  }
  const auto res = detail::lm_solve(resid, jac, p0);
  if (!res.converged || !res.p.allFinite()) {
    throw FitFailureError(series.branch_label + ": hyperbola fit did not converge");
  }

  HyperbolaFit fit;
  fit.b_par = res.p(0);
  fit.b_perp = std::abs(res.p(1));  // sign unobservable
  fit.g_eff = free_g ? std::abs(res.p(2)) : a0;
  fit.g_fixed = !free_g;
  fit.n_points = n;
  fit.vertex_candidates = count_local_minima(series);

  Eigen::MatrixXd cov = res.jtj.ldlt().solve(Eigen::MatrixXd::Identity(n_params, n_params));
  if (uniform_weights && n > n_params) {
    cov *= res.cost / static_cast<double>(n - n_params);
  }
  fit.covariance = cov;

  double ss = 0.0;
  for (const auto& pt : pts) {
    const double d = eval_hyperbola(pt.b, fit.b_par, fit.b_perp, fit.g_eff) - pt.freq;
    ss += d * d;
  }
  fit.residual_rms = std::sqrt(ss / n);
  return fit;
}

GyroFit fit_gyromagnetic(const std::vector<LinePositionSeries>& series_set, bool uniform_weights) {
  if (series_set.empty()) throw InsufficientDataError("no series supplied");
  GyroFit out;
  double num = 0.0;
  double den = 0.0;
  for (const auto& s : series_set) {
    HyperbolaFit f = fit_hyperbola(s, std::nullopt, uniform_weights);
    const double sigma = f.g_eff_err();
    const double w = sigma > 0.0 ? 1.0 / (sigma * sigma) : 0.0;
    out.per_series.push_back(std::move(f));
    out.g_signed.push_back(-out.per_series.back().g_eff);
    num += w * out.per_series.back().g_eff;
    den += w;
  }
  if (den > 0.0) {
    out.combined_g = -num / den;
    out.combined_err = std::sqrt(1.0 / den);
  } else {
    // all fits reported zero variance: plain mean, zero error
    double sum = 0.0;
    for (double g : out.g_signed) sum += g;
    out.combined_g = sum / static_cast<double>(out.g_signed.size());
    out.combined_err = 0.0;
  }
  return out;
}

}  // namespace oeem
