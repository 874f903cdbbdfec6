#pragma once

#include <map>
#include <string>

#include "oeem/geometry.hpp"

namespace oeem {

/// Effective g-tensors of the two Kramers doublets addressed by the
/// optical transition, expressed in the D1-D2-b frame for magnetic
/// class I. The numeric values are external configuration: they come from
/// published magnetic-resonance characterization, not from this codebase.
struct GTensorPair {
  Mat3 g_ground = Mat3::Zero();
  Mat3 g_excited = Mat3::Zero();
  std::string source;

  void validate() const;
};

/// Config file payload: the main tensor pair plus optional named perturbed
/// variants (e.g. for dopants near co-dopant-induced satellite lines).
struct GTensorConfig {
  GTensorPair main;
  std::map<std::string, GTensorPair> variants;
};

/// Reads a JSON file of the form
///   { "source": "...",
///     "g_ground":  [[...3 rows...]], "g_excited": [[...]],
///     "variants": { "name": { "g_ground": ..., "g_excited": ... } } }
/// Matrices are row-major in the D1-D2-b frame.
GTensorConfig load_g_tensors(const std::string& path);

}  // namespace oeem
