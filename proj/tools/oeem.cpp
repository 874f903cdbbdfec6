// Command-line front end: site inspection, coupling prediction, sweep and
// trace simulation, spectral analysis, line fitting, prominence
// optimization, and the envelope-modulation oracle.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oeem/csv.hpp"
#include "oeem/errors.hpp"
#include "oeem/fitting.hpp"
#include "oeem/modulation.hpp"
#include "oeem/prominence.hpp"
#include "oeem/rng.hpp"
#include "oeem/run_config.hpp"
#include "oeem/spectral.hpp"
#include "oeem/spin_model.hpp"
#include "oeem/sweep.hpp"

namespace fs = std::filesystem;
using namespace oeem;

namespace {

std::string fmt(double v) { return csv::format_double(v); }

Vec3 parse_axis(const std::string& text) {
  if (text == "b") return b_axis();
  if (text == "D1" || text == "d1") return d1_axis();
  if (text == "D2" || text == "d2") return d2_axis();
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(csv::to_double(item));
  if (parts.size() != 3) throw ConfigError("axis must be 'b', 'D1', 'D2' or 'x,y,z'");
  Vec3 v(parts[0], parts[1], parts[2]);
  if (v.norm() == 0.0) throw ConfigError("axis must be nonzero");
  return v.normalized();
}

SpinBranch parse_branch(const std::string& text) {
  if (text == "down") return SpinBranch::down;
  if (text == "up") return SpinBranch::up;
  throw ConfigError("branch must be 'down' or 'up'");
}

MagneticClass parse_class(const std::string& text) {
  if (text == "I") return MagneticClass::I;
  if (text == "II") return MagneticClass::II;
  throw ConfigError("magnetic class must be 'I' or 'II'");
}

TraceMode parse_mode(const std::string& text) {
  if (text == "amplitude") return TraceMode::amplitude;
  if (text == "intensity") return TraceMode::intensity;
  throw ConfigError("mode must be 'amplitude' or 'intensity'");
}

std::vector<int> resolve_sites(const SpinSystem& sys, const std::vector<std::string>& labels) {
  std::vector<int> out;
  for (const auto& l : labels) out.push_back(site_index(sys.sites, l));
  return out;
}

std::vector<double> magnitude_list(const std::vector<double>& explicit_b, double b_min,
                                   double b_max, int steps) {
  if (!explicit_b.empty()) return explicit_b;
  if (steps < 1) throw ConfigError("need at least one field step");
  std::vector<double> out;
  for (int i = 0; i < steps; ++i) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    out.push_back(b_min + (b_max - b_min) * t);
  }
  return out;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

// ---------------------------------------------------------------------------

void cmd_sites(const RunConfig& cfg) {
  const auto sites = cfg.site_file.empty() ? default_site_catalog() : load_site_catalog(cfg.site_file);
  validate_catalog(sites);
  std::string text = "label,d1_angstrom,d2_angstrom,b_angstrom,distance_angstrom\n";
  for (const auto& s : sites) {
    text += csv::join_row({s.label, fmt(s.position.x() / kAngstrom), fmt(s.position.y() / kAngstrom),
                           fmt(s.position.z() / kAngstrom), fmt(s.distance / kAngstrom)});
    std::printf("%-5s d1=%7.3f  d2=%7.3f  b=%7.3f  d=%6.3f angstrom\n", s.label.c_str(),
                s.position.x() / kAngstrom, s.position.y() / kAngstrom, s.position.z() / kAngstrom,
                s.distance / kAngstrom);
  }
  csv::write_atomic(out_path(cfg, "sites.csv"), text);
  std::printf("wrote %s (%zu sites)\n", out_path(cfg, "sites.csv").c_str(), sites.size());
}

void cmd_predict(const RunConfig& cfg, const Vec3& field, const std::vector<std::string>& labels,
                 SpinBranch branch, MagneticClass cls) {
  const SpinSystem sys = cfg.build_system().for_class(cls);
  const auto indices = labels.empty()
                           ? [&] {
                               std::vector<int> all(sys.sites.size());
                               for (std::size_t i = 0; i < all.size(); ++i) all[i] = (int)i;
                               return all;
                             }()
                           : resolve_sites(sys, labels);

  std::string text =
      "site,class,branch,b_d1_tesla,b_d2_tesla,b_b_tesla,rho,p,delta_g_hz,delta_e_hz,"
      "a_g_hz,a_e_hz,b_par_g_tesla,b_perp_g_tesla,b_par_e_tesla,b_perp_e_tesla\n";
  const Vec3 dir = field.normalized();
  for (int idx : indices) {
    const auto c = site_coupling(sys.sites[idx], sys.tensors, field, branch, sys.constants,
                                 sys.zero_field_threshold);
    const auto f = field_components(c, dir);
    text += csv::join_row({c.site_label, to_string(cls), to_string(branch), fmt(field.x()),
                           fmt(field.y()), fmt(field.z()), fmt(c.rho), fmt(c.p), fmt(c.delta_g),
                           fmt(c.delta_e), fmt(c.a_g), fmt(c.a_e), fmt(f.b_par_g), fmt(f.b_perp_g),
                           fmt(f.b_par_e), fmt(f.b_perp_e)});
    std::printf("%-5s rho=%.2f  p=%.3f  delta_g=%8.1f kHz  delta_e=%8.1f kHz  |A_g|=%6.0f kHz  "
                "|A_e|=%6.0f kHz\n",
                c.site_label.c_str(), c.rho, c.p, c.delta_g / 1e3, c.delta_e / 1e3, c.a_g / 1e3,
                c.a_e / 1e3);
  }
  csv::write_atomic(out_path(cfg, "couplings.csv"), text);
  std::printf("wrote %s\n", out_path(cfg, "couplings.csv").c_str());
}

void cmd_sweep(const RunConfig& cfg, const SweepSpec& spec) {
  const SpinSystem sys = cfg.build_system();
  const auto map = predict_linemap(sys, spec);
  std::string text = "site,class,component,b_tesla,freq_hz,rho\n";
  for (const auto& e : map.entries) {
    text += csv::join_row(
        {e.site, to_string(e.cls), to_string(e.component), fmt(e.b), fmt(e.freq), fmt(e.rho)});
  }
  csv::write_atomic(out_path(cfg, "linemap.csv"), text);
  std::printf("wrote %s (%zu lines, rho_sat=%.2f)\n", out_path(cfg, "linemap.csv").c_str(),
              map.entries.size(), map.rho_sat);
}

void write_trace(const RunConfig& cfg, const std::string& stem, const EchoTrace& trace,
                 const nlohmann::json& meta) {
  std::string text = "tau_s,value\n";
  for (std::size_t i = 0; i < trace.tau.size(); ++i) {
    text += csv::join_row({fmt(trace.tau[i]), fmt(trace.values[i])});
  }
  csv::write_atomic(out_path(cfg, stem + ".csv"), text);
  csv::write_atomic(out_path(cfg, stem + ".meta.json"), meta.dump(2) + "\n");
}

void cmd_simulate(const RunConfig& cfg, const SweepSpec& spec, const SweepSimulation& sim,
                  bool emit_traces) {
  const SpinSystem sys = cfg.build_system();
  const auto result = simulate_sweep(sys, spec, sim);

  std::string text = "b_tesla,freq_hz,magnitude\n";
  for (const auto& fsp : result) {
    for (std::size_t k = 0; k < fsp.spectrum.freq.size(); ++k) {
      text += csv::join_row({fmt(fsp.b), fmt(fsp.spectrum.freq[k]), fmt(fsp.spectrum.magnitude[k])});
    }
  }
  csv::write_atomic(out_path(cfg, "sweep_map.csv"), text);
  std::printf("wrote %s (%zu field points)\n", out_path(cfg, "sweep_map.csv").c_str(),
              result.size());

  if (emit_traces) {
    for (std::size_t i = 0; i < spec.magnitudes.size(); ++i) {
      const EchoTrace trace = sweep_trace(sys, spec, sim, i);

      nlohmann::json meta;
      meta["b_tesla"] = spec.magnitudes[i];
      meta["t2_s"] = sim.t2;
      meta["gamma"] = sim.gamma;
      meta["mode"] = to_string(sim.mode);
      meta["noise_sigma"] = sim.noise_sigma;
      meta["seed"] = sim.seed;
      meta["branch"] = to_string(spec.branch);
      meta["ensemble"] = sim.ensemble;
      if (!sim.ensemble) meta["class"] = to_string(sim.single_class);
      char stem[32];
      std::snprintf(stem, sizeof(stem), "trace_%03zu", i);
      write_trace(cfg, stem, trace, meta);
    }
    std::printf("wrote %zu trace files\n", spec.magnitudes.size());
  }
}

EchoTrace read_trace(const RunConfig& cfg, const std::string& path) {
  const csv::Table t = csv::read(path);
  const int ct = t.column(cfg.trace_tau_column);
  const int cv = t.column(cfg.trace_value_column);
  EchoTrace trace;
  for (const auto& row : t.rows) {
    trace.tau.push_back(csv::to_double(row[ct]));
    trace.values.push_back(csv::to_double(row[cv]));
  }
  trace.validate();
  return trace;
}

void cmd_spectrum(const RunConfig& cfg, const std::string& trace_file, int pad_factor,
                  double pad_to_s, const std::string& window, double threshold_sigma) {
  const EchoTrace trace = read_trace(cfg, trace_file);
  if (pad_to_s > 0.0) {
    // absolute pad target given as the padded record length 2*tau
    pad_factor = std::max(1, (int)std::lround(pad_to_s / (2.0 * trace.tau.back())));
  }
  DecayFit decay;
  const EchoTrace residual = detrend(trace, &decay);
  const SpectralWindow win = window == "hann" ? SpectralWindow::hann : SpectralWindow::none;
  const Spectrum spec = spectrum(residual, pad_factor, win);
  const auto peaks = find_peaks(spec, threshold_sigma);

  std::string stext = "freq_hz,magnitude\n";
  for (std::size_t k = 0; k < spec.freq.size(); ++k) {
    stext += csv::join_row({fmt(spec.freq[k]), fmt(spec.magnitude[k])});
  }
  csv::write_atomic(out_path(cfg, "spectrum.csv"), stext);

  std::string ptext = "freq_hz,magnitude,width_hz\n";
  for (const auto& p : peaks) {
    ptext += csv::join_row({fmt(p.frequency), fmt(p.magnitude), fmt(p.width_estimate)});
  }
  csv::write_atomic(out_path(cfg, "peaks.csv"), ptext);

  std::printf("detrend: amplitude=%.6g t2=%.6g s gamma=%.4f residual_rms=%.3g\n", decay.amplitude,
              decay.t2, decay.gamma, decay.residual_rms);
  std::printf("spectrum: %zu bins, native resolution %.3f Hz, pad %d\n", spec.freq.size(),
              spec.native_resolution, spec.pad_factor);
  for (const auto& p : peaks) {
    std::printf("peak %10.3f kHz  magnitude %.4g  width %.3f kHz\n", p.frequency / 1e3, p.magnitude,
                p.width_estimate / 1e3);
  }
  std::printf("wrote %s and %s\n", out_path(cfg, "spectrum.csv").c_str(),
              out_path(cfg, "peaks.csv").c_str());
}

LinePositionSeries read_series(const std::string& path) {
  const csv::Table t = csv::read(path);
  const int cb = t.column("b_tesla");
  const int cf = t.column("freq_hz");
  const int ce = t.column("freq_err_hz");
  LinePositionSeries s;
  s.branch_label = fs::path(path).stem().string();
  for (const auto& row : t.rows) {
    s.points.push_back({csv::to_double(row[cb]), csv::to_double(row[cf]), csv::to_double(row[ce])});
  }
  return s;
}

std::string fit_block(const HyperbolaFit& f, const std::string& label) {
  std::ostringstream os;
  os << "series: " << label << "\n";
  os << "n_points: " << f.n_points << "\n";
  os << "b_par_tesla: " << fmt(f.b_par) << " +- " << fmt(f.b_par_err()) << "\n";
  os << "b_perp_tesla: " << fmt(f.b_perp) << " +- " << fmt(f.b_perp_err()) << "\n";
  os << "g_eff_mhz_per_tesla: " << fmt(f.g_eff / 1e6);
  if (f.g_fixed) {
    os << " (fixed)\n";
  } else {
    os << " +- " << fmt(f.g_eff_err() / 1e6) << "\n";
  }
  os << "residual_rms_hz: " << fmt(f.residual_rms) << "\n";
  os << "vertex_candidates: " << f.vertex_candidates << "\n";
  return os.str();
}

void cmd_fit_hyperbola(const RunConfig& cfg, const std::string& series_file,
                       std::optional<double> fix_g_mhz, bool uniform_weights) {
  const LinePositionSeries series = read_series(series_file);
  std::optional<double> fix_g;
  if (fix_g_mhz) fix_g = *fix_g_mhz * 1e6;
  const HyperbolaFit fit = fit_hyperbola(series, fix_g, uniform_weights);
  const std::string report = fit_block(fit, series.branch_label);
  csv::write_atomic(out_path(cfg, "fit_report.txt"), report);
  std::fputs(report.c_str(), stdout);
  std::printf("wrote %s\n", out_path(cfg, "fit_report.txt").c_str());
}

void cmd_fit_gyro(const RunConfig& cfg, const std::vector<std::string>& series_files,
                  bool uniform_weights) {
  std::vector<LinePositionSeries> set;
  for (const auto& f : series_files) set.push_back(read_series(f));
  const GyroFit gyro = fit_gyromagnetic(set, uniform_weights);

  std::ostringstream os;
  for (std::size_t i = 0; i < set.size(); ++i) {
    os << fit_block(gyro.per_series[i], set[i].branch_label);
    os << "g_signed_mhz_per_tesla: " << fmt(gyro.g_signed[i] / 1e6) << "\n\n";
  }
  os << "combined_g_mhz_per_tesla: " << fmt(gyro.combined_g / 1e6) << " +- "
     << fmt(gyro.combined_err / 1e6) << "\n";
  csv::write_atomic(out_path(cfg, "gyro_report.txt"), os.str());
  std::fputs(os.str().c_str(), stdout);
  std::printf("wrote %s\n", out_path(cfg, "gyro_report.txt").c_str());
}

void cmd_prominence(const RunConfig& cfg, const std::vector<std::string>& labels, bool free_dir,
                    const Vec3& axis, double b_min, double b_max, double angular_step,
                    int mag_steps, bool refine, SpinBranch branch) {
  const SpinSystem sys = cfg.build_system();
  FieldSearchSpace space;
  space.constraint =
      free_dir ? FieldSearchSpace::Direction::free_sphere : FieldSearchSpace::Direction::fixed_axis;
  space.axis = axis;
  space.b_min = b_min;
  space.b_max = b_max;
  space.grid.angular_step_deg = angular_step;
  space.grid.n_magnitude_steps = mag_steps;
  space.grid.refine = refine;

  std::vector<int> indices;
  if (labels.empty()) {
    indices.resize(sys.sites.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = (int)i;
  } else {
    indices = resolve_sites(sys, labels);
  }

  std::string text = "site,lambda_max,b_d1,b_d2,b_b,rho_best\n";
  std::string bars = "site,lambda_max\n";
  for (int idx : indices) {
    const auto r = maximize_prominence(sys, idx, space, branch);
    text += csv::join_row({r.site_label, fmt(r.lambda), fmt(r.best_field.x()),
                           fmt(r.best_field.y()), fmt(r.best_field.z()), fmt(r.rho_at_best)});
    bars += csv::join_row({r.site_label, fmt(r.lambda)});
    std::printf("%-5s lambda=%8.3f at B=(%.4f, %.4f, %.4f) T, rho=%.3f\n", r.site_label.c_str(),
                r.lambda, r.best_field.x(), r.best_field.y(), r.best_field.z(), r.rho_at_best);
  }
  csv::write_atomic(out_path(cfg, "prominence.csv"), text);
  csv::write_atomic(out_path(cfg, "prominence_bars.csv"), bars);
  std::printf("wrote %s\n", out_path(cfg, "prominence.csv").c_str());
}

int cmd_oracle(const RunConfig& cfg, int trials, double tau_max, int samples, double field_max) {
  const PhysicalConstants pc;
  const auto grid = uniform_grid(tau_max, samples);
  double worst = 0.0;
  std::uint64_t ctr = 0;
  auto draw = [&] { return rng::to_unit(rng::splitmix64(cfg.seed ^ rng::splitmix64(ctr++))); };
  for (int t = 0; t < trials; ++t) {
    Vec3 bg, be;
    do {
      for (int k = 0; k < 3; ++k) bg(k) = (2.0 * draw() - 1.0) * field_max;
      for (int k = 0; k < 3; ++k) be(k) = (2.0 * draw() - 1.0) * field_max;
    } while (bg.norm() < 5e-3 || be.norm() < 5e-3);

    const auto sim = quantum_echo_oracle(bg, be, grid, pc);
    const SpinTone tone{pc.yttrium_gamma_hz_per_tesla() * bg.norm(),
                        pc.yttrium_gamma_hz_per_tesla() * be.norm(), branching_contrast(bg, be)};
    const std::vector<SpinTone> tones{tone};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, std::abs(sim[i] - envelope(grid[i], tones)));
    }
  }
  const bool pass = worst <= 1e-9;
  std::ostringstream os;
  os << "trials: " << trials << "\n"
     << "tau_max_s: " << fmt(tau_max) << "\n"
     << "max_abs_deviation: " << fmt(worst) << "\n"
     << "tolerance: 1e-09\n"
     << "result: " << (pass ? "PASS" : "FAIL") << "\n";
  csv::write_atomic(out_path(cfg, "oracle_report.txt"), os.str());
  std::printf("max deviation = %.3e (tolerance 1e-09): %s\n", worst, pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"superhyperfine echo-envelope-modulation toolkit"};
  app.require_subcommand(1);

  std::string config_file, g_tensor_file, g_tensor_variant, site_file, output_dir;
  std::optional<double> g_y;
  std::optional<double> zero_field_threshold;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_file, "key = value configuration file");
  app.add_option("--g-tensors", g_tensor_file, "g-tensor JSON config");
  app.add_option("--g-tensor-variant", g_tensor_variant, "named variant from the config");
  app.add_option("--sites", site_file, "site catalog override CSV");
  app.add_option("--output-dir", output_dir, "output directory (default: out)");
  app.add_option("--seed", seed, "RNG seed (default: 1)");
  app.add_option("--g-y", g_y, "override the 89Y nuclear g-factor");
  app.add_option("--zero-field-threshold", zero_field_threshold,
                 "minimum valid bias field in tesla (default 1e-3)");

  // predict
  auto* predict = app.add_subcommand("predict", "per-site couplings at one bias field");
  double p_field_b = 0.0;
  std::string p_field, p_branch = "down", p_class = "I";
  std::vector<std::string> p_sites;
  predict->add_option("--field-b", p_field_b, "bias field along the b-axis, tesla");
  predict->add_option("--field", p_field, "bias field vector d1,d2,b in tesla");
  predict->add_option("--site", p_sites, "site label (repeatable; default: all)");
  predict->add_option("--branch", p_branch, "down|up");
  predict->add_option("--class", p_class, "magnetic class I|II");

  auto* sites_cmd = app.add_subcommand("sites", "print and export the site catalog");

  // sweep / simulate share field options
  auto add_sweep_options = [](CLI::App* cmd, std::string& axis, double& tilt_p, double& tilt_a,
                              std::vector<double>& b_list, double& b_min, double& b_max, int& steps,
                              std::string& branch, std::vector<std::string>& sites,
                              double& rho_sat) {
    cmd->add_option("--axis", axis, "sweep axis: b, D1, D2 or x,y,z");
    cmd->add_option("--tilt-polar", tilt_p, "misalignment polar angle, degrees");
    cmd->add_option("--tilt-azimuth", tilt_a, "misalignment azimuth, degrees");
    cmd->add_option("--b", b_list, "explicit signed magnitudes, tesla (repeatable)");
    cmd->add_option("--b-min", b_min, "first magnitude, tesla");
    cmd->add_option("--b-max", b_max, "last magnitude, tesla");
    cmd->add_option("--steps", steps, "number of field points");
    cmd->add_option("--branch", branch, "down|up");
    cmd->add_option("--site", sites, "restrict to these sites (repeatable)");
    cmd->add_option("--rho-sat", rho_sat, "contrast rendered at full intensity");
  };

  auto* sweep_cmd = app.add_subcommand("sweep", "first-principles line-position map");
  std::string sw_axis = "b", sw_branch = "down";
  double sw_tp = 0.0, sw_ta = 0.0, sw_bmin = 0.01, sw_bmax = 0.3, sw_rhosat = 1.0;
  std::vector<double> sw_blist;
  std::vector<std::string> sw_sites;
  int sw_steps = 30;
  add_sweep_options(sweep_cmd, sw_axis, sw_tp, sw_ta, sw_blist, sw_bmin, sw_bmax, sw_steps,
                    sw_branch, sw_sites, sw_rhosat);

  auto* sim_cmd = app.add_subcommand("simulate", "synthesize traces and spectra over a sweep");
  std::string sm_axis = "b", sm_branch = "down", sm_mode = "amplitude", sm_class = "I";
  double sm_tp = 0.0, sm_ta = 0.0, sm_bmin = 0.01, sm_bmax = 0.3, sm_rhosat = 1.0;
  std::vector<double> sm_blist;
  std::vector<std::string> sm_sites;
  int sm_steps = 30, sm_pad = 8, sm_samples = 2048;
  double sm_t2 = 1e-3, sm_gamma = 1.3, sm_taumax = 500e-6, sm_noise = 0.0;
  bool sm_ensemble = false, sm_emit = false;
  add_sweep_options(sim_cmd, sm_axis, sm_tp, sm_ta, sm_blist, sm_bmin, sm_bmax, sm_steps, sm_branch,
                    sm_sites, sm_rhosat);
  sim_cmd->add_option("--t2", sm_t2, "coherence time, seconds");
  sim_cmd->add_option("--gamma", sm_gamma, "stretch exponent (>= 1)");
  sim_cmd->add_option("--mode", sm_mode, "amplitude|intensity");
  sim_cmd->add_option("--pad-factor", sm_pad, "zero-padding factor");
  sim_cmd->add_option("--tau-max", sm_taumax, "largest interpulse delay, seconds");
  sim_cmd->add_option("--samples", sm_samples, "samples per trace");
  sim_cmd->add_option("--noise-sigma", sm_noise, "additive Gaussian noise level");
  sim_cmd->add_flag("--ensemble", sm_ensemble, "average both magnetic classes");
  sim_cmd->add_option("--class", sm_class, "magnetic class for single-emitter runs");
  sim_cmd->add_flag("--emit-traces", sm_emit, "write per-field trace CSVs");

  auto* spec_cmd = app.add_subcommand("spectrum", "detrend a trace and extract peaks");
  std::string sp_trace, sp_window = "none";
  int sp_pad = 8;
  double sp_padto = 0.0, sp_thresh = 5.0;
  spec_cmd->add_option("--trace", sp_trace, "trace CSV (tau_s,value)")->required();
  spec_cmd->add_option("--pad-factor", sp_pad, "zero-padding factor");
  spec_cmd->add_option("--pad-to", sp_padto, "pad to this record length in seconds");
  spec_cmd->add_option("--window", sp_window, "none|hann");
  spec_cmd->add_option("--threshold-sigma", sp_thresh, "peak threshold in robust sigmas");

  auto* fith_cmd = app.add_subcommand("fit-hyperbola", "fit line positions vs field");
  std::string fh_series;
  std::optional<double> fh_fixg;
  bool fh_uniform = false;
  fith_cmd->add_option("--series", fh_series, "CSV b_tesla,freq_hz,freq_err_hz")->required();
  fith_cmd->add_option("--fix-g", fh_fixg, "fix the gyromagnetic ratio, MHz/T");
  fith_cmd->add_flag("--uniform-weights", fh_uniform, "ignore per-point errors");

  auto* fitg_cmd = app.add_subcommand("fit-gyro", "gyromagnetic ratio from several series");
  std::vector<std::string> fg_series;
  bool fg_uniform = false;
  fitg_cmd->add_option("--series", fg_series, "series CSV (repeatable)")->required();
  fitg_cmd->add_flag("--uniform-weights", fg_uniform, "ignore per-point errors");

  auto* prom_cmd = app.add_subcommand("prominence", "optimize the bias field per site");
  std::vector<std::string> pr_sites;
  bool pr_free = false, pr_norefine = false;
  std::string pr_axis = "b", pr_branch = "down";
  double pr_bmin = 1e-3, pr_bmax = 1.0, pr_astep = 10.0;
  int pr_msteps = 40;
  prom_cmd->add_option("--site", pr_sites, "site label (repeatable; default: all)");
  prom_cmd->add_flag("--free", pr_free, "search all directions (default: fixed axis)");
  prom_cmd->add_option("--axis", pr_axis, "fixed axis when not --free");
  prom_cmd->add_option("--b-min", pr_bmin, "minimum magnitude, tesla");
  prom_cmd->add_option("--b-max", pr_bmax, "maximum magnitude, tesla");
  prom_cmd->add_option("--angular-step", pr_astep, "direction grid step, degrees");
  prom_cmd->add_option("--mag-steps", pr_msteps, "magnitude steps per sign");
  prom_cmd->add_flag("--no-refine", pr_norefine, "grid search only");
  prom_cmd->add_option("--branch", pr_branch, "down|up");

  auto* oracle_cmd = app.add_subcommand("oracle", "validate the envelope model brute-force");
  int or_trials = 100, or_samples = 301;
  double or_taumax = 300e-6, or_fieldmax = 0.4;
  oracle_cmd->add_option("--trials", or_trials, "number of random field pairs");
  oracle_cmd->add_option("--tau-max", or_taumax, "grid end, seconds");
  oracle_cmd->add_option("--samples", or_samples, "grid samples");
  oracle_cmd->add_option("--field-max", or_fieldmax, "field component bound, tesla");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg;
    if (!config_file.empty()) cfg = load_run_config(config_file);
    if (!g_tensor_file.empty()) cfg.g_tensor_file = g_tensor_file;
    if (!g_tensor_variant.empty()) cfg.g_tensor_variant = g_tensor_variant;
    if (!site_file.empty()) cfg.site_file = site_file;
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (seed) cfg.seed = *seed;
    if (g_y) cfg.g_y_override = *g_y;
    if (zero_field_threshold) cfg.zero_field_threshold = *zero_field_threshold;

    if (app.got_subcommand(sites_cmd)) {
      cmd_sites(cfg);
    } else if (app.got_subcommand(predict)) {
      Vec3 field = p_field_b * b_axis();
      if (!p_field.empty()) {
        std::vector<double> parts;
        std::stringstream ss(p_field);
        std::string item;
        while (std::getline(ss, item, ',')) parts.push_back(csv::to_double(item));
        if (parts.size() != 3) throw ConfigError("--field expects d1,d2,b in tesla");
        field = Vec3(parts[0], parts[1], parts[2]);
      }
      cmd_predict(cfg, field, p_sites, parse_branch(p_branch), parse_class(p_class));
    } else if (app.got_subcommand(sweep_cmd)) {
      SweepSpec spec;
      spec.axis = parse_axis(sw_axis);
      spec.tilt_polar_deg = sw_tp;
      spec.tilt_azimuth_deg = sw_ta;
      spec.magnitudes = magnitude_list(sw_blist, sw_bmin, sw_bmax, sw_steps);
      spec.branch = parse_branch(sw_branch);
      spec.rho_sat = sw_rhosat;
      if (!sw_sites.empty()) {
        spec.site_indices = resolve_sites(cfg.build_system(), sw_sites);
      }
      cmd_sweep(cfg, spec);
    } else if (app.got_subcommand(sim_cmd)) {
      SweepSpec spec;
      spec.axis = parse_axis(sm_axis);
      spec.tilt_polar_deg = sm_tp;
      spec.tilt_azimuth_deg = sm_ta;
      spec.magnitudes = magnitude_list(sm_blist, sm_bmin, sm_bmax, sm_steps);
      spec.branch = parse_branch(sm_branch);
      spec.rho_sat = sm_rhosat;
      if (!sm_sites.empty()) {
        spec.site_indices = resolve_sites(cfg.build_system(), sm_sites);
      }
      SweepSimulation sim;
      sim.t2 = sm_t2;
      sim.gamma = sm_gamma;
      sim.mode = parse_mode(sm_mode);
      sim.pad_factor = sm_pad;
      sim.tau_max = sm_taumax;
      sim.n_samples = static_cast<std::size_t>(sm_samples);
      sim.noise_sigma = sm_noise;
      sim.seed = cfg.seed;
      sim.ensemble = sm_ensemble;
      sim.single_class = parse_class(sm_class);
      cmd_simulate(cfg, spec, sim, sm_emit);
    } else if (app.got_subcommand(spec_cmd)) {
      cmd_spectrum(cfg, sp_trace, sp_pad, sp_padto, sp_window, sp_thresh);
    } else if (app.got_subcommand(fith_cmd)) {
      cmd_fit_hyperbola(cfg, fh_series, fh_fixg, fh_uniform);
    } else if (app.got_subcommand(fitg_cmd)) {
      cmd_fit_gyro(cfg, fg_series, fg_uniform);
    } else if (app.got_subcommand(prom_cmd)) {
      cmd_prominence(cfg, pr_sites, pr_free, parse_axis(pr_axis), pr_bmin, pr_bmax, pr_astep,
                     pr_msteps, !pr_norefine, parse_branch(pr_branch));
    } else if (app.got_subcommand(oracle_cmd)) {
      return cmd_oracle(cfg, or_trials, or_taumax, or_samples, or_fieldmax);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: Unexpected: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
