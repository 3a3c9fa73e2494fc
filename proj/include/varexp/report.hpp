#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace varexp {

/// Shortest representation that round-trips a double (%.17g trimmed).
std::string fmt17(double v);

std::uint64_t fnv1a(const std::string& data);

struct ReportRow {
  std::string anchor;  // stable inequality id
  std::string detail;
  double value = 0.0;  // measured quantity
  double bound = 0.0;  // admitted bound (0 when informational)
  bool pass = true;
};

struct SuiteReport {
  std::string suite;
  std::vector<ReportRow> rows;

  void add(std::string anchor, std::string detail, double value, double bound,
           bool ok);
  bool pass() const;
  int failures() const;
};

std::string suite_csv(const SuiteReport& r);
nlohmann::ordered_json suite_json(const SuiteReport& r, std::uint64_t manifestHash,
                                  std::uint64_t seed);

/// Write-to-temp then rename, so concurrent readers never see a torn file.
void write_text_atomic(const std::string& path, const std::string& body);

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> pts;
};

/// Self-contained SVG line plot (log-scale y optional).
std::string svg_line_plot(const std::string& title, const std::string& xlabel,
                          const std::string& ylabel,
                          const std::vector<PlotSeries>& series, bool logY);

}  // namespace varexp
