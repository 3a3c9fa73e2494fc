#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varexp/report.hpp"

namespace varexp {

/// Constants frozen by one calibration run and committed next to the
/// sources; verification compares fresh measurements against these
/// instead of re-deriving them on every run.
struct GoldenValues {
  double roundtripRel = 0.0;  // deepest-cut reconstruction error, relative
  double optimalC = 0.0;      // two-sided coefficient/function constant
  double nikolskiiC0 = 0.0;   // variable-q transfer multiplier
};

GoldenValues calibrate_golden(std::uint64_t seed);
GoldenValues load_golden(const std::string& path);
void save_golden(const std::string& path, const GoldenValues& gv);

/// The verification suites, in reporting order.
const std::vector<std::string>& suite_names();

/// Runs one suite.  golden may be null; the suites that consume a
/// calibrated constant then calibrate it on the fly (slower, but
/// self-contained).
SuiteReport run_suite(const std::string& name, std::uint64_t seed,
                      const GoldenValues* golden);

}  // namespace varexp
