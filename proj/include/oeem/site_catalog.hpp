#pragma once

#include <string>
#include <vector>

#include "oeem/constants.hpp"
#include "oeem/geometry.hpp"

namespace oeem {

/// A host-lattice yttrium nuclear-spin site, positioned relative to the
/// erbium dopant in the D1-D2-b frame. Stored in SI meters; angstrom only
/// at the file/CLI boundary.
struct YttriumSite {
  std::string label;
  Vec3 position;
  double distance = 0.0;  // meters, redundant with |position|

  static YttriumSite from_angstrom(std::string label, double d1, double d2, double b);
};

/// The embedded catalog: the fifteen nearest yttrium neighbors of an
/// erbium dopant in class I of site 1, ordered by distance.
std::vector<YttriumSite> default_site_catalog();

/// Checks per-site |position| vs distance (0.01 angstrom) and the
/// non-decreasing distance ordering; throws ConfigError on violation.
void validate_catalog(const std::vector<YttriumSite>& sites);

/// Override file: CSV with header label,d1_angstrom,d2_angstrom,b_angstrom
/// (extra columns ignored). Distances are recomputed from the positions.
std::vector<YttriumSite> load_site_catalog(const std::string& path);

int site_index(const std::vector<YttriumSite>& sites, const std::string& label);

}  // namespace oeem
