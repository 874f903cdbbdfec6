#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "oeem/spin_model.hpp"

namespace oeem {

/// Run-wide configuration shared by CLI commands. Loaded from a key=value
/// config file and/or command-line flags; flags win. All randomness flows
/// from the single seed; the default is fixed, never wall-clock derived.
struct RunConfig {
  std::string g_tensor_file;  // required by commands that evaluate couplings
  std::string g_tensor_variant;  // optional named variant from the config
  std::string site_file;      // optional catalog override
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  std::optional<double> g_y_override;
  double zero_field_threshold = kZeroFieldThresholdTesla;
  // column mapping for ingesting externally produced trace files
  std::string trace_tau_column = "tau_s";
  std::string trace_value_column = "value";

  /// Loads tensors and catalog, applies overrides, validates everything.
  SpinSystem build_system() const;
};

/// Parses `key = value` lines ('#' comments, blank lines ignored).
/// Unknown keys are ConfigErrors.
RunConfig load_run_config(const std::string& path);

void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace oeem
