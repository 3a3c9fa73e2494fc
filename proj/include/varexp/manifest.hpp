#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "varexp/exponent.hpp"
#include "varexp/grid.hpp"

namespace varexp {

/// Parsed run manifest.  Parameter gates are re-checked at load; paths
/// are resolved against the manifest's own directory.
struct RunManifest {
  Grid grid;
  Exponent p, q;
  WeightSequence w;
  char space = 'B';        // B | F
  int K = 2, L = 2, Jmax = 6;
  double tau = 2.0;
  std::vector<std::string> suites;
  std::string input;       // GridFunction CSV (norm / decompose)
  std::string outDir = "out";
  std::uint64_t seed = 1;
  std::uint64_t hash = 0;  // FNV-1a of the manifest bytes
};

RunManifest load_manifest(const std::string& path);

/// CSV with header `# n A N`, then one row per sample: index, real, imag.
void save_grid_function(const std::string& path, const GridFunction& f);
GridFunction load_grid_function(const std::string& path);

/// Exponent samples from CSV rows (coordinates..., value) on g's layout;
/// requires exactly one row per grid point, in index order.
Exponent exponent_from_csv(const Grid& g, const std::string& path);

}  // namespace varexp
