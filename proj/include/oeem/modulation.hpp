#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "oeem/constants.hpp"
#include "oeem/geometry.hpp"
#include "oeem/spin_model.hpp"

namespace oeem {

/// One coupled nuclear spin as seen by the echo envelope: its two
/// splittings and branching contrast.
struct SpinTone {
  double delta_g = 0.0;  // Hz
  double delta_e = 0.0;  // Hz
  double rho = 0.0;      // in [0, 1]
};

inline SpinTone to_tone(const SpinCoupling& c) { return {c.delta_g, c.delta_e, c.rho}; }

std::vector<SpinTone> to_tones(const std::vector<SpinCoupling>& couplings);

enum class TraceMode { amplitude, intensity };

inline const char* to_string(TraceMode m) {
  return m == TraceMode::amplitude ? "amplitude" : "intensity";
}

struct ModulationParams {
  std::vector<SpinTone> spins;
  double t2 = 1e-3;     // s
  double gamma = 1.0;   // stretch exponent, >= 1
  TraceMode mode = TraceMode::amplitude;

  void validate() const;
};

/// Sampled echo signal over a uniform interpulse-delay grid.
struct EchoTrace {
  std::vector<double> tau;  // s, uniform spacing
  std::vector<double> values;
  TraceMode mode = TraceMode::amplitude;
  double noise_sigma = 0.0;
  std::uint64_t rng_seed = 0;

  double dt() const { return tau.size() > 1 ? tau[1] - tau[0] : 0.0; }
  void validate() const;  // equal lengths, uniform spacing to 1e-9 relative
};

std::vector<double> uniform_grid(double tau_max, std::size_t n_samples);

/// Envelope modulation factor: product over spins of
/// 1 - rho/2 * (1 - cos(2 pi delta_g tau)) * (1 - cos(2 pi delta_e tau)).
/// Always in [-1, 1].
double envelope(double tau, std::span<const SpinTone> spins);

/// Decay-weighted trace: amplitude mode evaluates
/// envelope(tau) * exp(-(2 tau / T2)^gamma); intensity mode squares it.
/// Optional additive zero-mean Gaussian noise (sigma in signal units) is
/// reproducible from the seed and independent of evaluation order.
EchoTrace synthesize_trace(const ModulationParams& params, std::vector<double> tau_grid,
                           double noise_sigma = 0.0, std::uint64_t rng_seed = 0);

/// Single-threaded reference for synthesize_trace; kept for tests and the
/// benchmark. Must agree bit-exactly with the parallel kernel.
EchoTrace synthesize_trace_serial(const ModulationParams& params, std::vector<double> tau_grid,
                                  double noise_sigma = 0.0, std::uint64_t rng_seed = 0);

/// Brute-force reference for the single-spin envelope factor: propagates
/// the joint (optical two-level x nuclear spin-1/2) density matrix through
/// an ideal pi/2 - tau - pi - tau sequence, with the nucleus starting in
/// the maximally mixed state and precessing around b_tot_g or b_tot_e
/// depending on the optical state. Returns the echo field amplitude
/// normalized to the bare two-level-system echo.
std::vector<double> quantum_echo_oracle(const Vec3& b_tot_g, const Vec3& b_tot_e,
                                        std::span<const double> tau_grid,
                                        const PhysicalConstants& pc = {});

}  // namespace oeem
