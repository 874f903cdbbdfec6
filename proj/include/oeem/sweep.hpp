#pragma once

#include <cstdint>
#include <vector>

#include "oeem/spectral.hpp"
#include "oeem/spin_model.hpp"

namespace oeem {

/// The four spectral components a coupled spin contributes in amplitude
/// mode: the two splittings and their sum and absolute difference.
enum class LineComponent { delta_g, delta_e, delta_sum, delta_diff };

const char* to_string(LineComponent c);

struct SweepSpec {
  Vec3 axis = b_axis();
  double tilt_polar_deg = 0.0;    // misalignment from the axis
  double tilt_azimuth_deg = 0.0;  // orientation of the misalignment
  std::vector<double> magnitudes;  // signed tesla
  SpinBranch branch = SpinBranch::down;
  std::vector<int> site_indices;  // empty = whole catalog
  double rho_sat = 1.0;           // contrast value rendered at full intensity

  void validate() const;
  Vec3 direction() const;  // tilted unit vector
};

struct LineMapEntry {
  std::string site;
  MagneticClass cls = MagneticClass::I;
  LineComponent component = LineComponent::delta_g;
  double b = 0.0;     // tesla
  double freq = 0.0;  // Hz
  double rho = 0.0;
};

/// First-principles line positions for every (site, class, component,
/// field) combination, with the branching contrast attached as the
/// intensity weight. Rendering intensity is min(rho / rho_sat, 1).
struct LineMap {
  std::vector<LineMapEntry> entries;
  double rho_sat = 1.0;
};

LineMap predict_linemap(const SpinSystem& system, const SweepSpec& spec);

struct SweepSimulation {
  double t2 = 1e-3;  // s
  double gamma = 1.3;
  TraceMode mode = TraceMode::amplitude;
  int pad_factor = 8;
  double tau_max = 500e-6;      // s
  std::size_t n_samples = 2048;
  double noise_sigma = 0.0;
  std::uint64_t seed = 1;
  bool ensemble = false;  // average both magnetic classes' traces
  MagneticClass single_class = MagneticClass::I;
};

struct FieldSpectrum {
  double b = 0.0;  // tesla
  Spectrum spectrum;
};

/// The synthesized (pre-detrend) trace for one field point of a sweep:
/// couplings of the selected sites for the chosen class, or the average of
/// both classes' traces in ensemble mode, plus seeded noise derived from
/// (seed, field index).
EchoTrace sweep_trace(const SpinSystem& system, const SweepSpec& spec, const SweepSimulation& sim,
                      std::size_t field_index);

/// End-to-end pipeline per field point: couplings -> trace synthesis ->
/// detrend -> spectrum. Field points are independent; the output is in
/// magnitude order regardless of scheduling, and noise streams depend only
/// on (seed, field index, sample index).
std::vector<FieldSpectrum> simulate_sweep(const SpinSystem& system, const SweepSpec& spec,
                                          const SweepSimulation& sim);

/// Single-threaded reference for simulate_sweep; bit-identical results.
std::vector<FieldSpectrum> simulate_sweep_serial(const SpinSystem& system, const SweepSpec& spec,
                                                 const SweepSimulation& sim);

}  // namespace oeem
