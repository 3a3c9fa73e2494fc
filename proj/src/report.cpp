#include "varexp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace varexp {

std::string fmt17(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void SuiteReport::add(std::string anchor, std::string detail, double value,
                      double bound, bool ok) {
  rows.push_back({std::move(anchor), std::move(detail), value, bound, ok});
}

bool SuiteReport::pass() const { return failures() == 0; }

int SuiteReport::failures() const {
  int n = 0;
  for (const auto& r : rows) n += r.pass ? 0 : 1;
  return n;
}

std::string suite_csv(const SuiteReport& r) {
  std::string out = "anchor,detail,value,bound,pass\n";
  for (const auto& row : r.rows) {
    out += row.anchor;
    out += ',';
    std::string d = row.detail;  // commas would shift columns
    std::replace(d.begin(), d.end(), ',', ';');
    out += d;
    out += ',';
    out += fmt17(row.value);
    out += ',';
    out += fmt17(row.bound);
    out += ',';
    out += row.pass ? '1' : '0';
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json suite_json(const SuiteReport& r, std::uint64_t manifestHash,
                                  std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["manifest_fnv1a"] = manifestHash;
  j["seed"] = seed;
  j["pass"] = r.pass();
  j["failures"] = r.failures();
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json o;
    o["anchor"] = row.anchor;
    o["detail"] = row.detail;
    o["value"] = row.value;
    o["bound"] = row.bound;
    o["pass"] = row.pass;
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  return j;
}

void write_text_atomic(const std::string& path, const std::string& body) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out << body;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed for " + path);
}

std::string svg_line_plot(const std::string& title, const std::string& xlabel,
                          const std::string& ylabel,
                          const std::vector<PlotSeries>& series, bool logY) {
  const int W = 720, H = 480, mL = 70, mR = 20, mT = 40, mB = 50;
  double xLo = 1e300, xHi = -1e300, yLo = 1e300, yHi = -1e300;
  auto yOf = [&](double y) { return logY ? std::log10(std::max(y, 1e-300)) : y; };
  for (const auto& s : series)
    for (auto [x, y] : s.pts) {
      xLo = std::min(xLo, x);
      xHi = std::max(xHi, x);
      yLo = std::min(yLo, yOf(y));
      yHi = std::max(yHi, yOf(y));
    }
  if (xLo >= xHi) xHi = xLo + 1;
  if (yLo >= yHi) yHi = yLo + 1;
  auto px = [&](double x) {
    return mL + (x - xLo) / (xHi - xLo) * (W - mL - mR);
  };
  auto py = [&](double y) {
    return H - mB - (yOf(y) - yLo) / (yHi - yLo) * (H - mT - mB);
  };
  static const char* palette[] = {"#1f6fb2", "#c0392b", "#1e8449", "#7d3c98",
                                  "#b7950b", "#17817b"};
  std::string s;
  char buf[256];
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
       "viewBox=\"0 0 720 480\">\n";
  s += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"24\" font-family=\"sans-serif\" "
                "font-size=\"16\">%s</text>\n",
                mL, title.c_str());
  s += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"#333\"/>\n",
                mL, H - mB, W - mR, H - mB);
  s += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"#333\"/>\n",
                mL, mT, mL, H - mB);
  s += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" "
                "font-size=\"12\">%s</text>\n",
                (W - mL) / 2, H - 14, xlabel.c_str());
  s += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"16\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" "
                "transform=\"rotate(-90 16 %d)\">%s%s</text>\n",
                (H + mT) / 2, (H + mT) / 2, ylabel.c_str(),
                logY ? " (log10)" : "");
  s += buf;
  // axis extremes
  for (double t : {0.0, 0.5, 1.0}) {
    double xv = xLo + t * (xHi - xLo);
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.0f\" y=\"%d\" font-family=\"sans-serif\" "
                  "font-size=\"11\" text-anchor=\"middle\">%.3g</text>\n",
                  px(xv), H - mB + 18, xv);
    s += buf;
    double yv = yLo + t * (yHi - yLo);
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%.0f\" font-family=\"sans-serif\" "
                  "font-size=\"11\" text-anchor=\"end\">%.3g</text>\n",
                  mL - 6, H - mB - t * (H - mT - mB) + 4, yv);
    s += buf;
  }
  int k = 0;
  for (const auto& ser : series) {
    const char* col = palette[k % 6];
    std::string path;
    bool first = true;
    for (auto [x, y] : ser.pts) {
      std::snprintf(buf, sizeof buf, "%c%.2f %.2f ", first ? 'M' : 'L', px(x),
                    py(y));
      path += buf;
      first = false;
    }
    s += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + col +
         "\" stroke-width=\"1.6\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" "
                  "font-size=\"12\" fill=\"%s\">%s</text>\n",
                  W - mR - 150, mT + 16 * (k + 1), col, ser.name.c_str());
    s += buf;
    ++k;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace varexp
