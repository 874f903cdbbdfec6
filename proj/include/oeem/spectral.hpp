#pragma once

#include <vector>

#include "oeem/modulation.hpp"

namespace oeem {

/// One-sided magnitude spectrum of a detrended trace.
struct Spectrum {
  std::vector<double> freq;       // Hz, uniform from 0
  std::vector<double> magnitude;  // >= 0
  int pad_factor = 1;
  double native_resolution = 0.0;  // Hz, 1/(2 tau_max)

  double spacing() const { return freq.size() > 1 ? freq[1] - freq[0] : 0.0; }
};

struct Peak {
  double frequency = 0.0;      // Hz, sub-bin refined
  double magnitude = 0.0;
  double width_estimate = 0.0;  // Hz
};

/// Fitted decay parameters reported alongside the detrended trace.
struct DecayFit {
  double amplitude = 0.0;
  double t2 = 0.0;
  double gamma = 1.0;
  double residual_rms = 0.0;
};

/// Least-squares fits amplitude * exp(-(2 tau/T2)^gamma) (gamma >= 1) and
/// subtracts it. An all-zero trace yields a zero residual rather than an
/// error. Throws FitFailureError when the decay fit cannot converge.
EchoTrace detrend(const EchoTrace& trace, DecayFit* fit_out = nullptr);

enum class SpectralWindow { none, hann };

/// Magnitude of the one-sided DFT of the (already detrended) trace. The
/// transform record spans twice the trace length times pad_factor, so the
/// bin spacing is exactly native_resolution / pad_factor with
/// native_resolution = 1/(2 tau_max). Raw DFT normalization
/// (X_k = sum_n x_n exp(-2 pi i k n / L)).
Spectrum spectrum(const EchoTrace& trace, int pad_factor,
                  SpectralWindow window = SpectralWindow::none);

/// Local maxima above threshold_sigma times the robust noise level
/// (1.4826 * median absolute deviation of the magnitudes). A candidate
/// must dominate a window of one Rayleigh width (1/tau_max) on each side,
/// so leakage sidelobes and zero-pad interpolation ripple are never
/// reported as peaks; the Rayleigh-width zone around DC is excluded as
/// detrend residue. Positions are refined by local quadratic
/// interpolation; widths are half-power estimates. Sorted by frequency.
std::vector<Peak> find_peaks(const Spectrum& spec, double threshold_sigma = 5.0);

}  // namespace oeem
