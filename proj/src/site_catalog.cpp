#include "oeem/site_catalog.hpp"

#include <cmath>
#include <utility>

#include "oeem/csv.hpp"
#include "oeem/errors.hpp"

namespace oeem {

YttriumSite YttriumSite::from_angstrom(std::string label, double d1, double d2, double b) {
  YttriumSite s;
  s.label = std::move(label);
  s.position = Vec3(d1, d2, b) * kAngstrom;
  s.distance = s.position.norm();
  return s;
}

std::vector<YttriumSite> default_site_catalog() {
  // label, D1, D2, b in angstrom
  static const struct {
    const char* label;
    double d1, d2, b;
  } rows[] = {
      {"Y1", -0.65, 3.23, -0.81},  {"Y2", -3.45, 0.29, 0.00},   {"Y3", -1.67, -1.87, 2.45},
      {"Y4", 2.26, -2.25, -1.72},  {"Y5", -1.78, 2.16, 2.45},   {"Y6", -2.80, -2.95, -0.81},
      {"Y7", 3.93, -0.38, 2.55},   {"Y8", -1.67, -1.87, -4.27}, {"Y9", -1.78, 2.16, -4.27},
      {"Y10", 5.06, 0.70, -0.91},  {"Y11", -1.02, -5.10, 1.64}, {"Y12", 1.02, 5.10, 1.64},
      {"Y13", 3.28, 2.86, -3.36},  {"Y14", 3.28, 2.86, 3.36},   {"Y15", 3.93, -0.38, -4.17},
  };
  std::vector<YttriumSite> out;
  out.reserve(std::size(rows));
  for (const auto& r : rows) {
    out.push_back(YttriumSite::from_angstrom(r.label, r.d1, r.d2, r.b));
  }
  return out;
}

void validate_catalog(const std::vector<YttriumSite>& sites) {
  double prev = 0.0;
  for (const auto& s : sites) {
    if (!s.position.allFinite()) {
      throw ConfigError("site " + s.label + ": non-finite position");
    }
    if (std::abs(s.position.norm() - s.distance) > 0.01 * kAngstrom) {
      throw ConfigError("site " + s.label + ": distance inconsistent with position");
    }
    if (s.distance + 1e-4 * kAngstrom < prev) {
      throw ConfigError("site catalog must be ordered by non-decreasing distance (" + s.label + ")");
    }
    prev = s.distance;
  }
}

std::vector<YttriumSite> load_site_catalog(const std::string& path) {
  csv::Table t = csv::read(path);
  const int cl = t.column("label");
  const int c1 = t.column("d1_angstrom");
  const int c2 = t.column("d2_angstrom");
  const int cb = t.column("b_angstrom");
  std::vector<YttriumSite> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    out.push_back(YttriumSite::from_angstrom(row[cl], csv::to_double(row[c1]),
                                             csv::to_double(row[c2]), csv::to_double(row[cb])));
  }
  if (out.empty()) throw ConfigError("site catalog file is empty: " + path);
  validate_catalog(out);
  return out;
}

int site_index(const std::vector<YttriumSite>& sites, const std::string& label) {
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i].label == label) return static_cast<int>(i);
  }
  throw ConfigError("unknown site label: " + label);
}

}  // namespace oeem
