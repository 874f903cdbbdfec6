#pragma once

#include <string>

#include "oeem/run_config.hpp"

namespace oeem::testing {

inline std::string data_path(const std::string& name) {
  return std::string(OEEM_DATA_DIR) + "/" + name;
}

inline SpinSystem test_system() {
  RunConfig cfg;
  cfg.g_tensor_file = data_path("g_tensors_er_yso_site1.json");
  return cfg.build_system();
}

// tiny deterministic generator for property-style tests
struct Lcg {
  std::uint64_t state;
  explicit Lcg(std::uint64_t seed) : state(seed) {}
  double uniform(double lo, double hi) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    const double u = static_cast<double>(state >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
};

}  // namespace oeem::testing
