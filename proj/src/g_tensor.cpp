#include "oeem/g_tensor.hpp"

#include <fstream>

#include <json.hpp>

#include "oeem/errors.hpp"

namespace oeem {

using nlohmann::json;

void GTensorPair::validate() const {
  for (const Mat3* m : {&g_ground, &g_excited}) {
    if (!m->allFinite()) throw ConfigError("g-tensor has non-finite entries");
    // |g^T u| > 0 for every direction u <=> the tensor is non-singular
    if (std::abs(m->determinant()) < 1e-9) {
      throw ConfigError("g-tensor is singular; effective g would vanish along some direction");
    }
  }
}

static Mat3 parse_matrix(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("g-tensor config missing '" + key + "'");
  const auto& rows = j.at(key);
  if (!rows.is_array() || rows.size() != 3) {
    throw ConfigError("'" + key + "' must be a 3x3 array");
  }
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    const auto& row = rows.at(r);
    if (!row.is_array() || row.size() != 3) throw ConfigError("'" + key + "' must be a 3x3 array");
    for (int c = 0; c < 3; ++c) m(r, c) = row.at(c).get<double>();
  }
  return m;
}

static GTensorPair parse_pair(const json& j, const std::string& fallback_source) {
  GTensorPair p;
  p.g_ground = parse_matrix(j, "g_ground");
  p.g_excited = parse_matrix(j, "g_excited");
  p.source = j.value("source", fallback_source);
  p.validate();
  return p;
}

GTensorConfig load_g_tensors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open g-tensor config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("bad g-tensor config " + path + ": " + e.what());
  }
  GTensorConfig cfg;
  cfg.main = parse_pair(j, "");
  if (cfg.main.source.empty()) {
    throw ConfigError("g-tensor config must carry a 'source' provenance string");
  }
  if (j.contains("variants")) {
    for (const auto& [name, sub] : j.at("variants").items()) {
      cfg.variants.emplace(name, parse_pair(sub, cfg.main.source));
    }
  }
  return cfg;
}

}  // namespace oeem
