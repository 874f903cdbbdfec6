// Timing comparison of the OpenMP kernels against their serial reference
// implementations: trace synthesis, the prominence field scan, and the
// sweep pipeline.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>

#include "oeem/modulation.hpp"
#include "oeem/prominence.hpp"
#include "oeem/run_config.hpp"
#include "oeem/sweep.hpp"

using namespace oeem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s) {
  std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n", name,
              serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  cfg.g_tensor_file = argc > 1 ? argv[1] : "data/g_tensors_er_yso_site1.json";
  const SpinSystem sys = cfg.build_system();
  std::printf("threads: %d\n", omp_get_max_threads());

  // trace synthesis: full catalog, long grid
  {
    ModulationParams params;
    params.spins = to_tones(sys.couplings(0.175 * b_axis(), SpinBranch::down));
    params.t2 = 400e-6;
    const auto grid = uniform_grid(2e-3, 400000);
    volatile double sink = 0.0;
    const double ser = time_best_of(3, [&] {
      sink = synthesize_trace_serial(params, grid, 0.01, 7).values.back();
    });
    const double par = time_best_of(3, [&] {
      sink = synthesize_trace(params, grid, 0.01, 7).values.back();
    });
    (void)sink;
    report("synthesize_trace", ser, par);
  }

  // prominence grid scan
  {
    FieldSearchSpace space;
    space.grid.angular_step_deg = 15.0;
    space.grid.n_magnitude_steps = 20;
    space.grid.refine = false;
    const int site = site_index(sys.sites, "Y4");
    volatile double sink = 0.0;
    const double ser =
        time_best_of(3, [&] { sink = maximize_prominence_serial(sys, site, space).lambda; });
    const double par =
        time_best_of(3, [&] { sink = maximize_prominence(sys, site, space).lambda; });
    (void)sink;
    report("maximize_prominence", ser, par);
  }

  // sweep pipeline
  {
    SweepSpec spec;
    for (int i = 0; i < 24; ++i) spec.magnitudes.push_back(0.05 + 0.01 * i);
    SweepSimulation sim;
    sim.t2 = 400e-6;
    sim.tau_max = 1e-3;
    sim.n_samples = 2001;
    sim.pad_factor = 8;
    volatile double sink = 0.0;
    const double ser = time_best_of(2, [&] {
      sink = simulate_sweep_serial(sys, spec, sim).back().spectrum.magnitude.back();
    });
    const double par = time_best_of(2, [&] {
      sink = simulate_sweep(sys, spec, sim).back().spectrum.magnitude.back();
    });
    (void)sink;
    report("simulate_sweep", ser, par);
  }
  return 0;
}
