#include "oeem/sweep.hpp"

#include <cmath>

#include "oeem/errors.hpp"
#include "oeem/rng.hpp"

namespace oeem {

const char* to_string(LineComponent c) {
  switch (c) {
    case LineComponent::delta_g: return "delta_g";
    case LineComponent::delta_e: return "delta_e";
    case LineComponent::delta_sum: return "delta_sum";
    default: return "delta_diff";
  }
}

void SweepSpec::validate() const {
  if (magnitudes.empty()) throw ConfigError("sweep needs at least one field magnitude");
  if (std::abs(tilt_polar_deg) > 10.0) throw ConfigError("tilt must stay within 10 degrees");
  if (!(rho_sat > 0.0 && rho_sat <= 1.0)) throw ConfigError("rho_sat must lie in (0, 1]");
}

Vec3 SweepSpec::direction() const {
  return tilted_direction(axis, tilt_polar_deg, tilt_azimuth_deg);
}

namespace {

std::vector<int> selected_sites(const SpinSystem& system, const SweepSpec& spec) {
  if (!spec.site_indices.empty()) {
    for (int i : spec.site_indices) {
      if (i < 0 || i >= static_cast<int>(system.sites.size())) {
        throw ConfigError("sweep site index out of range");
      }
    }
    return spec.site_indices;
  }
  std::vector<int> all(system.sites.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return all;
}

}  // namespace

LineMap predict_linemap(const SpinSystem& system, const SweepSpec& spec) {
  spec.validate();
  const Vec3 dir = spec.direction();
  const auto sites = selected_sites(system, spec);

  LineMap map;
  map.rho_sat = spec.rho_sat;
  map.entries.reserve(sites.size() * spec.magnitudes.size() * 8);
  for (MagneticClass cls : {MagneticClass::I, MagneticClass::II}) {
    const SpinSystem sys = system.for_class(cls);
    for (double m : spec.magnitudes) {
      const Vec3 field = m * dir;
      for (int idx : sites) {
        const SpinCoupling c = site_coupling(sys.sites[idx], sys.tensors, field, spec.branch,
                                             sys.constants, sys.zero_field_threshold);
        const auto add = [&](LineComponent comp, double freq) {
          map.entries.push_back({c.site_label, cls, comp, m, freq, c.rho});
        };
        add(LineComponent::delta_g, c.delta_g);
        add(LineComponent::delta_e, c.delta_e);
        add(LineComponent::delta_sum, c.delta_g + c.delta_e);
        add(LineComponent::delta_diff, std::abs(c.delta_g - c.delta_e));
      }
    }
  }
  return map;
}

EchoTrace sweep_trace(const SpinSystem& system, const SweepSpec& spec, const SweepSimulation& sim,
                      std::size_t field_index) {
  spec.validate();
  if (field_index >= spec.magnitudes.size()) throw ConfigError("field index out of range");
  const auto sites = selected_sites(system, spec);
  const Vec3 field = spec.magnitudes[field_index] * spec.direction();
  const std::vector<double> grid = uniform_grid(sim.tau_max, sim.n_samples);

  auto tones_for = [&](MagneticClass cls) {
    const SpinSystem sys = system.for_class(cls);
    std::vector<SpinTone> tones;
    tones.reserve(sites.size());
    for (int idx : sites) {
      tones.push_back(to_tone(site_coupling(sys.sites[idx], sys.tensors, field, spec.branch,
                                            sys.constants, sys.zero_field_threshold)));
    }
    return tones;
  };

  ModulationParams params;
  params.t2 = sim.t2;
  params.gamma = sim.gamma;
  params.mode = sim.mode;

  EchoTrace trace;
  if (sim.ensemble) {
    params.spins = tones_for(MagneticClass::I);
    EchoTrace a = synthesize_trace_serial(params, grid, 0.0, 0);
    params.spins = tones_for(MagneticClass::II);
    EchoTrace b = synthesize_trace_serial(params, grid, 0.0, 0);
    trace = a;
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
      trace.values[i] = 0.5 * (a.values[i] + b.values[i]);
    }
  } else {
    params.spins = tones_for(sim.single_class);
    trace = synthesize_trace_serial(params, grid, 0.0, 0);
  }
  if (sim.noise_sigma > 0.0) {
    const std::uint64_t field_seed = rng::splitmix64(sim.seed ^ rng::splitmix64(field_index));
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
      trace.values[i] += sim.noise_sigma * rng::gaussian_at(field_seed, i);
    }
    trace.noise_sigma = sim.noise_sigma;
    trace.rng_seed = sim.seed;
  }
  return trace;
}

namespace {

FieldSpectrum simulate_one(const SpinSystem& system, const SweepSpec& spec,
                           const SweepSimulation& sim, std::size_t field_index) {
  FieldSpectrum out;
  out.b = spec.magnitudes[field_index];
  out.spectrum = spectrum(detrend(sweep_trace(system, spec, sim, field_index)), sim.pad_factor);
  return out;
}

std::vector<FieldSpectrum> run_sweep(const SpinSystem& system, const SweepSpec& spec,
                                     const SweepSimulation& sim, bool parallel) {
  spec.validate();
  std::vector<FieldSpectrum> out(spec.magnitudes.size());
  const std::int64_t n = static_cast<std::int64_t>(spec.magnitudes.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
      out[i] = simulate_one(system, spec, sim, static_cast<std::size_t>(i));
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      out[i] = simulate_one(system, spec, sim, static_cast<std::size_t>(i));
    }
  }
  return out;
}

}  // namespace

std::vector<FieldSpectrum> simulate_sweep(const SpinSystem& system, const SweepSpec& spec,
                                          const SweepSimulation& sim) {
  return run_sweep(system, spec, sim, true);
}

std::vector<FieldSpectrum> simulate_sweep_serial(const SpinSystem& system, const SweepSpec& spec,
                                                 const SweepSimulation& sim) {
  return run_sweep(system, spec, sim, false);
}

}  // namespace oeem
