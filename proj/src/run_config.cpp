#include "oeem/run_config.hpp"

#include <charconv>
#include <fstream>

#include "oeem/errors.hpp"

namespace oeem {

SpinSystem RunConfig::build_system() const {
  if (g_tensor_file.empty()) {
    throw ConfigError("a g-tensor config file is required (g_tensor_file / --g-tensors)");
  }
  SpinSystem sys;
  if (g_y_override) sys.constants.g_Y = *g_y_override;
  sys.constants.validate();
  sys.zero_field_threshold = zero_field_threshold;

  const GTensorConfig tensors = load_g_tensors(g_tensor_file);
  if (g_tensor_variant.empty()) {
    sys.tensors = tensors.main;
  } else {
    const auto it = tensors.variants.find(g_tensor_variant);
    if (it == tensors.variants.end()) {
      throw ConfigError("unknown g-tensor variant: " + g_tensor_variant);
    }
    sys.tensors = it->second;
  }

  sys.sites = site_file.empty() ? default_site_catalog() : load_site_catalog(site_file);
  validate_catalog(sys.sites);
  return sys;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw ConfigError("bad numeric value for '" + key + "': " + v);
  }
  return out;
}

}  // namespace

void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "g_tensor_file") {
    cfg.g_tensor_file = value;
  } else if (key == "g_tensor_variant") {
    cfg.g_tensor_variant = value;
  } else if (key == "site_file") {
    cfg.site_file = value;
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_double(value, key));
  } else if (key == "g_y") {
    cfg.g_y_override = parse_double(value, key);
  } else if (key == "zero_field_threshold") {
    cfg.zero_field_threshold = parse_double(value, key);
  } else if (key == "trace_tau_column") {
    cfg.trace_tau_column = value;
  } else if (key == "trace_value_column") {
    cfg.trace_value_column = value;
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    apply_config_line(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return cfg;
}

}  // namespace oeem
