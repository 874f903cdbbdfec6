#include "oeem/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "levmar.hpp"
#include "oeem/errors.hpp"

namespace oeem {

using std::numbers::pi;

namespace {

// p = (A0, ln T2, s) with gamma = 1 + s^2
Eigen::VectorXd decay_residual(const Eigen::VectorXd& p, const std::vector<double>& tau,
                               const std::vector<double>& val) {
  const double a0 = p(0);
  const double t2 = std::exp(p(1));
  const double gamma = 1.0 + p(2) * p(2);
  Eigen::VectorXd r(static_cast<Eigen::Index>(tau.size()));
  for (std::size_t i = 0; i < tau.size(); ++i) {
    r(static_cast<Eigen::Index>(i)) = a0 * std::exp(-std::pow(2.0 * tau[i] / t2, gamma)) - val[i];
  }
  return r;
}

}  // namespace

EchoTrace detrend(const EchoTrace& trace, DecayFit* fit_out) {
  trace.validate();
  if (trace.tau.size() < 8) throw ConfigError("detrend needs at least 8 samples");

  EchoTrace out = trace;
  double peak = 0.0;
  for (double v : trace.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) {
    // degenerate all-zero input: defined as already detrended
    if (fit_out) *fit_out = DecayFit{};
    std::fill(out.values.begin(), out.values.end(), 0.0);
    return out;
  }

  // initial guesses: amplitude from the first sample, T2 from the 1/e
  // crossing of a lightly smoothed magnitude
  const std::size_t n = trace.tau.size();
  const std::size_t w = std::max<std::size_t>(1, n / 64);
  double a0 = std::abs(trace.values.front()) > 0.05 * peak ? trace.values.front() : peak;
  double t2_guess = 2.0 * trace.tau.back();
  for (std::size_t i = 0; i + w <= n; i += w) {
    double m = 0.0;
    for (std::size_t k = i; k < i + w; ++k) m += std::abs(trace.values[k]);
    m /= static_cast<double>(w);
    if (m < std::abs(a0) / std::numbers::e) {
      t2_guess = std::max(2.0 * trace.tau[i], 1e-12);
      break;
    }
  }

  Eigen::VectorXd p0(3);
  p0 << a0, std::log(t2_guess), 0.45;  // gamma ~ 1.2
  auto resid = [&](const Eigen::VectorXd& p) { return decay_residual(p, trace.tau, trace.values); };
  const auto res = detail::lm_solve(resid, nullptr, p0);
  if (!res.converged || !res.p.allFinite()) {
    throw FitFailureError("stretched-exponential decay fit did not converge");
  }

  const double amp = res.p(0);
  const double t2 = std::exp(res.p(1));
  const double gamma = 1.0 + res.p(2) * res.p(2);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = trace.values[i] - amp * std::exp(-std::pow(2.0 * trace.tau[i] / t2, gamma));
  }
  if (fit_out) {
    double ss = 0.0;
    for (double v : out.values) ss += v * v;
    *fit_out = DecayFit{amp, t2, gamma, std::sqrt(ss / static_cast<double>(n))};
  }
  return out;
}

namespace {
std::mutex fftw_plan_mutex;  // FFTW plan creation is not thread-safe
}

Spectrum spectrum(const EchoTrace& trace, int pad_factor, SpectralWindow window) {
  trace.validate();
  if (pad_factor < 1) throw ConfigError("pad_factor must be >= 1");
  const std::size_t n = trace.tau.size();
  if (n < 2) throw ConfigError("spectrum needs at least 2 samples");
  const double tau_max = trace.tau.back();

  // record of 2 * pad * tau_max so the bin spacing is exactly
  // native_resolution / pad_factor
  const std::size_t len = 2 * static_cast<std::size_t>(pad_factor) * (n - 1);
  std::vector<double> in(len, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double v = trace.values[i];
    if (window == SpectralWindow::hann) {
      v *= 0.5 * (1.0 - std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    in[i] = v;
  }

  const std::size_t n_out = len / 2 + 1;
  std::vector<fftw_complex> cplx(n_out);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(len), in.data(), cplx.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }

  Spectrum s;
  s.pad_factor = pad_factor;
  s.native_resolution = 1.0 / (2.0 * tau_max);
  const double df = s.native_resolution / static_cast<double>(pad_factor);
  s.freq.resize(n_out);
  s.magnitude.resize(n_out);
  for (std::size_t k = 0; k < n_out; ++k) {
    s.freq[k] = static_cast<double>(k) * df;
    s.magnitude[k] = std::hypot(cplx[k][0], cplx[k][1]);
  }
  return s;
}

std::vector<Peak> find_peaks(const Spectrum& spec, double threshold_sigma) {
  const auto& m = spec.magnitude;
  std::vector<Peak> out;
  if (m.size() < 3) return out;

  std::vector<double> tmp(m);
  std::nth_element(tmp.begin(), tmp.begin() + tmp.size() / 2, tmp.end());
  const double med = tmp[tmp.size() / 2];
  for (auto& v : tmp) v = std::abs(v - med);
  std::nth_element(tmp.begin(), tmp.begin() + tmp.size() / 2, tmp.end());
  const double noise = 1.4826 * tmp[tmp.size() / 2];
  const double floor_level = threshold_sigma * noise;

  // dominance window: one Rayleigh width (1/tau_max) per side, which is
  // 2 * pad_factor bins of the padded grid; finer structure is either
  // leakage sidelobes or interpolation ripple, never a resolvable line.
  // The same width around DC is excluded: below the record's resolution
  // only detrend residue lives.
  const std::size_t w = static_cast<std::size_t>(std::max(1, 2 * spec.pad_factor));
  const double df = spec.spacing();
  for (std::size_t k = w; k + 1 < m.size(); ++k) {
    if (m[k] < floor_level) continue;
    if (!(m[k] > m[k - 1] && m[k] > m[k + 1])) continue;
    const std::size_t lo = k >= w ? k - w : 0;
    const std::size_t hi = std::min(m.size() - 1, k + w);
    bool dominant = true;
    for (std::size_t j = lo; j <= hi && dominant; ++j) {
      if (j != k && m[j] > m[k]) dominant = false;
    }
    if (!dominant) continue;

    const double denom = m[k - 1] - 2.0 * m[k] + m[k + 1];
    double shift = 0.0;
    if (denom < 0.0) shift = std::clamp(0.5 * (m[k - 1] - m[k + 1]) / denom, -0.5, 0.5);
    Peak p;
    p.frequency = spec.freq[k] + shift * df;
    p.magnitude = m[k] - 0.25 * (m[k - 1] - m[k + 1]) * shift;

    // half-power width by linear interpolation, capped search range
    const double half = 0.5 * p.magnitude;
    const std::size_t cap = 50 * w;
    double f_left = spec.freq[k] - df * static_cast<double>(w);
    for (std::size_t j = k; j > 0 && k - j < cap; --j) {
      if (m[j - 1] <= half) {
        const double frac = (m[j] - half) / std::max(m[j] - m[j - 1], 1e-300);
        f_left = spec.freq[j] - frac * df;
        break;
      }
    }
    double f_right = spec.freq[k] + df * static_cast<double>(w);
    for (std::size_t j = k; j + 1 < m.size() && j - k < cap; ++j) {
      if (m[j + 1] <= half) {
        const double frac = (m[j] - half) / std::max(m[j] - m[j + 1], 1e-300);
        f_right = spec.freq[j] + frac * df;
        break;
      }
    }
    p.width_estimate = std::max(f_right - f_left, df);
    out.push_back(p);
  }
  return out;
}

}  // namespace oeem
