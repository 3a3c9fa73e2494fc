#include "varexp/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "varexp/report.hpp"

namespace varexp {

namespace {

using nlohmann::ordered_json;

std::string dirOf(const std::string& path) {
  auto pos = path.find_last_of('/');
  return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || p.front() == '/') return p;
  return base + "/" + p;
}

Exponent parseExponent(const Grid& g, const ordered_json& spec,
                       const std::string& base) {
  if (spec.is_number()) return Exponent::constant(g, spec.get<double>());
  std::string kind = spec.at("kind").get<std::string>();
  if (kind == "constant")
    return Exponent::constant(g, spec.at("value").get<double>());
  if (kind == "twopiece") {
    double l = spec.at("left").get<double>();
    double r = spec.at("right").get<double>();
    double s = spec.at("split").get<double>();
    return Exponent::fromFunction(
        g, [=](double x, double) { return x < s ? l : r; });
  }
  if (kind == "bump") {
    double b = spec.at("base").get<double>();
    double a = spec.at("amp").get<double>();
    double c = spec.value("center", 0.0);
    double w = spec.value("width", 1.0);
    return Exponent::fromFunction(g, [=](double x, double) {
      double t = (x - c) / w;
      return b + a * std::exp(-t * t);
    });
  }
  if (kind == "ramp") {
    double lo = spec.at("lo").get<double>();
    double hi = spec.at("hi").get<double>();
    return Exponent::fromFunction(g, [=, A = g.A](double x, double) {
      return lo + (hi - lo) * (x + A) / (2 * A);
    });
  }
  if (kind == "csv")
    return exponent_from_csv(g, resolve(base, spec.at("path").get<std::string>()));
  throw std::invalid_argument("manifest: unknown exponent kind '" + kind + "'");
}

WeightSequence parseWeight(const Grid& g, const ordered_json& spec, int Jmax) {
  if (spec.is_null()) return make_weight_constant_s(g, Jmax + 1, 0.0);
  std::string kind = spec.value("kind", std::string("constant"));
  int levels = spec.value("levels", Jmax + 1);
  if (levels < 1) throw std::invalid_argument("manifest: weight levels < 1");
  if (kind == "constant")
    return make_weight_constant_s(g, levels, spec.value("s", 0.0));
  if (kind == "two-microlocal")
    return make_weight_two_microlocal(g, levels, spec.at("s").get<double>(),
                                      spec.at("sprime").get<double>(),
                                      spec.value("x0", 0.0), spec.value("x1", 0.0));
  throw std::invalid_argument("manifest: unknown weight kind '" + kind + "'");
}

}  // namespace

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string bytes = buf.str();

  ordered_json j;
  try {
    j = ordered_json::parse(bytes);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("manifest: parse error: ") + e.what());
  }

  RunManifest m;
  m.hash = fnv1a(bytes);
  std::string base = dirOf(path);

  const auto& gj = j.value("grid", ordered_json::object());
  int n = gj.value("n", 1);
  double A = gj.value("A", 8.0);
  int N = gj.value("N", 4096);
  m.grid = Grid::make(n, A, N);

  const auto& sys = j.value("system", ordered_json::object());
  m.K = sys.value("K", 2);
  m.L = sys.value("L", 2);
  m.Jmax = sys.value("Jmax", 6);
  m.tau = sys.value("tau", 2.0);
  if (m.K < 0 || m.L < 0 || m.Jmax < 0)
    throw std::invalid_argument("manifest: system parameters must be nonnegative");

  m.p = j.contains("p") ? parseExponent(m.grid, j["p"], base)
                        : Exponent::constant(m.grid, 2.0);
  m.q = j.contains("q") ? parseExponent(m.grid, j["q"], base)
                        : Exponent::constant(m.grid, 2.0);
  if (m.p.pMin <= 0.0 || m.q.pMin <= 0.0)
    throw std::invalid_argument("manifest: exponents must be positive");

  m.w = parseWeight(m.grid, j.value("weight", ordered_json()), m.Jmax);

  std::string sp = j.value("space", std::string("B"));
  if (sp != "B" && sp != "F")
    throw std::invalid_argument("manifest: space must be B or F");
  m.space = sp[0];

  if (j.contains("suites"))
    for (const auto& s : j["suites"]) m.suites.push_back(s.get<std::string>());
  if (j.contains("input")) m.input = resolve(base, j["input"].get<std::string>());
  m.outDir = j.value("out", std::string("out"));
  m.seed = j.value("seed", std::uint64_t(1));
  return m;
}

void save_grid_function(const std::string& path, const GridFunction& f) {
  std::string body = "# " + std::to_string(f.grid.n) + " " + fmt17(f.grid.A) +
                     " " + std::to_string(f.grid.N) + "\n";
  for (std::int64_t i = 0; i < f.size(); ++i) {
    body += std::to_string(i);
    body += ',';
    body += fmt17(f.v[i].real());
    body += ',';
    body += fmt17(f.v[i].imag());
    body += '\n';
  }
  write_text_atomic(path, body);
}

GridFunction load_grid_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string header;
  std::getline(in, header);
  int n = 0, N = 0;
  double A = 0.0;
  if (std::sscanf(header.c_str(), "# %d %lf %d", &n, &A, &N) != 3)
    throw std::invalid_argument(path + ": bad header, want '# n A N'");
  GridFunction f(Grid::make(n, A, N));
  std::string line;
  std::int64_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    long long idx = -1;
    double re, im;
    if (std::sscanf(line.c_str(), "%lld,%lf,%lf", &idx, &re, &im) != 3)
      throw std::invalid_argument(path + ": bad row '" + line + "'");
    if (idx < 0 || idx >= f.size())
      throw std::invalid_argument(path + ": index out of range");
    f.v[idx] = {re, im};
    ++rows;
  }
  if (rows != f.size())
    throw std::invalid_argument(path + ": expected " + std::to_string(f.size()) +
                                " rows, got " + std::to_string(rows));
  return f;
}

Exponent exponent_from_csv(const Grid& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> values;
  values.reserve(g.size());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto pos = line.find_last_of(',');
    if (pos == std::string::npos)
      throw std::invalid_argument(path + ": bad row '" + line + "'");
    values.push_back(std::strtod(line.c_str() + pos + 1, nullptr));
  }
  if ((std::int64_t)values.size() != g.size())
    throw std::invalid_argument(path + ": expected " + std::to_string(g.size()) +
                                " samples, got " + std::to_string(values.size()));
  return Exponent::fromSamples(g, std::move(values));
}

}  // namespace varexp
