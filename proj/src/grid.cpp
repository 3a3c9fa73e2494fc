#include "varexp/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace varexp {

namespace {

bool isPowerOfTwo(int v) { return v > 0 && (v & (v - 1)) == 0; }

// FFTW's planner is not thread safe; executing a plan is.
std::mutex& plannerMutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Grid Grid::make(int n, double A, int N) {
  if (n != 1 && n != 2) throw std::invalid_argument("Grid: n must be 1 or 2");
  if (!(A > 0)) throw std::invalid_argument("Grid: A must be positive");
  if (N < 16 || !isPowerOfTwo(N))
    throw std::invalid_argument("Grid: N must be a power of two, N >= 16");
  Grid g;
  g.n = n;
  g.A = A;
  g.N = N;
  g.h = 2.0 * A / N;
  return g;
}

std::int64_t Grid::size() const {
  std::int64_t s = N;
  if (n == 2) s *= N;
  return s;
}

double Grid::cellVolume() const { return n == 1 ? h : h * h; }

std::array<int, 2> Grid::split(std::int64_t idx) const {
  if (n == 1) return {static_cast<int>(idx), 0};
  return {static_cast<int>(idx / N), static_cast<int>(idx % N)};
}

std::int64_t Grid::flatten(int i0, int i1) const {
  return n == 1 ? i0 : static_cast<std::int64_t>(i0) * N + i1;
}

std::array<double, 2> Grid::point(std::int64_t idx) const {
  auto [i0, i1] = split(idx);
  return {axisCoord(i0), n == 2 ? axisCoord(i1) : 0.0};
}

double Grid::radius(std::int64_t idx) const {
  auto p = point(idx);
  return n == 1 ? std::abs(p[0]) : std::hypot(p[0], p[1]);
}

Grid Grid::fourierGrid() const {
  Grid g;
  g.n = n;
  g.A = std::numbers::pi / h;
  g.N = N;
  g.h = 2.0 * g.A / N;
  return g;
}

GridFunction::GridFunction(const Grid& g) : grid(g), v(g.size(), cplx{0.0, 0.0}) {}

GridFunction::GridFunction(const Grid& g, std::vector<cplx> values)
    : grid(g), v(std::move(values)) {
  if (static_cast<std::int64_t>(v.size()) != g.size())
    throw std::invalid_argument("GridFunction: sample count does not match grid");
}

GridFunction GridFunction::sample(const Grid& g,
                                  const std::function<cplx(double, double)>& f) {
  GridFunction out(g);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto p = g.point(i);
    out.v[i] = f(p[0], p[1]);
  }
  out.checkFinite("GridFunction::sample");
  return out;
}

double GridFunction::absMax() const {
  double m = 0.0;
  for (const cplx& z : v) m = std::max(m, std::abs(z));
  return m;
}

bool GridFunction::isZero() const {
  for (const cplx& z : v)
    if (z != cplx{0.0, 0.0}) return false;
  return true;
}

void GridFunction::checkFinite(const char* what) const {
  for (const cplx& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument(std::string(what) + ": non-finite sample");
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  if (!(grid == o.grid)) throw std::invalid_argument("GridFunction: grid mismatch");
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  if (!(grid == o.grid)) throw std::invalid_argument("GridFunction: grid mismatch");
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
  return *this;
}

GridFunction& GridFunction::operator*=(cplx c) {
  for (cplx& z : v) z *= c;
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(cplx c, GridFunction a) { return a *= c; }

GridFunction abs(const GridFunction& f) {
  GridFunction out(f.grid);
  for (std::size_t i = 0; i < f.v.size(); ++i) out.v[i] = std::abs(f.v[i]);
  return out;
}

GridFunction pointwiseMul(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("pointwiseMul: grid mismatch");
  GridFunction out(a.grid);
  for (std::size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] * b.v[i];
  return out;
}

double DyadicCube::side() const { return std::ldexp(1.0, -j); }

std::array<double, 2> DyadicCube::center() const {
  double s = side();
  return {s * m[0], s * m[1]};
}

double DyadicCube::scaledHalfWidth(double d) const { return d * side() / 2.0; }

GridFunction cube_indicator(const Grid& g, const DyadicCube& q) {
  if (q.j < 0) throw std::invalid_argument("cube_indicator: level must be >= 0");
  double side = q.side();
  if (g.h > side / 4.0 + 1e-15) {
    // Need at least 4 cells per cube side.
    int required = g.N;
    while (2.0 * g.A / required > side / 4.0) required *= 2;
    throw std::invalid_argument(
        "cube_indicator: grid too coarse for level " + std::to_string(q.j) +
        ", need N >= " + std::to_string(required));
  }
  auto c = q.center();
  double half = side / 2.0;
  double tol = 1e-9 * g.h;
  bool meets = true;
  for (int a = 0; a < g.n; ++a)
    if (c[a] + half < -g.A - tol || c[a] - half > g.A + tol) meets = false;
  if (!meets) throw std::invalid_argument("cube_indicator: cube outside the box");

  GridFunction out(g);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto p = g.point(i);
    bool in = true;
    for (int a = 0; a < g.n; ++a)
      if (p[a] < c[a] - half - tol || p[a] > c[a] + half + tol) in = false;
    if (in) out.v[i] = 1.0;
  }
  return out;
}

cplx integrate(const GridFunction& f) {
  // Pairwise-ish summation is unnecessary at these sizes; plain Kahan
  // keeps the quadrature deterministic and accurate.
  cplx sum{0.0, 0.0}, comp{0.0, 0.0};
  for (const cplx& z : f.v) {
    cplx y = z - comp;
    cplx t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return f.grid.cellVolume() * sum;
}

void dft(std::vector<cplx>& data, const Grid& g, int sign) {
  if (static_cast<std::int64_t>(data.size()) != g.size())
    throw std::invalid_argument("dft: size mismatch");
  fftw_complex* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plannerMutex());
    plan = (g.n == 1)
               ? fftw_plan_dft_1d(g.N, p, p, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                  FFTW_ESTIMATE)
               : fftw_plan_dft_2d(g.N, g.N, p, p,
                                  sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                  FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plannerMutex());
    fftw_destroy_plan(plan);
  }
}

double dft_frequency(const Grid& g, int k) {
  int ks = k < g.N / 2 ? k : k - g.N;
  return 2.0 * std::numbers::pi * ks / (g.N * g.h);
}

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("convolve: grid mismatch");
  const Grid& gr = f.grid;
  const int N = gr.N;
  const int M = 2 * N;
  Grid big = Grid::make(gr.n, gr.A * 2.0, M);

  auto pad = [&](const GridFunction& a) {
    std::vector<cplx> out(big.size(), cplx{0.0, 0.0});
    for (std::int64_t i = 0; i < gr.size(); ++i) {
      auto [i0, i1] = gr.split(i);
      out[big.flatten(i0, i1)] = a.v[i];
    }
    return out;
  };

  std::vector<cplx> F = pad(f), G = pad(g);
  dft(F, big, -1);
  dft(G, big, -1);
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= G[i];
  dft(F, big, +1);

  double scale = gr.cellVolume() / static_cast<double>(big.size());
  GridFunction out(gr);
  const int off = N / 2;
  for (std::int64_t i = 0; i < gr.size(); ++i) {
    auto [i0, i1] = gr.split(i);
    out.v[i] = scale * F[big.flatten(i0 + off, gr.n == 2 ? i1 + off : 0)];
  }
  return out;
}

GridFunction eta_kernel(const Grid& g, int nu, double R) {
  if (!(R > 0)) throw std::invalid_argument("eta_kernel: R must be positive");
  double scale = std::ldexp(1.0, nu);
  double amp = std::pow(scale, g.n);
  GridFunction out(g);
  for (std::int64_t i = 0; i < g.size(); ++i)
    out.v[i] = amp * std::pow(1.0 + scale * g.radius(i), -R);
  return out;
}

GridFunction finite_difference(const GridFunction& f, std::array<int, 2> order) {
  GridFunction cur = f;
  const Grid& g = f.grid;
  auto at = [&](const GridFunction& a, int i0, int i1) -> cplx {
    if (i0 < 0 || i0 >= g.N || i1 < 0 || i1 >= g.N) return {0.0, 0.0};
    return a.v[g.flatten(i0, i1)];
  };
  for (int axis = 0; axis < g.n; ++axis) {
    for (int rep = 0; rep < order[axis]; ++rep) {
      GridFunction next(g);
      for (std::int64_t i = 0; i < g.size(); ++i) {
        auto [i0, i1] = g.split(i);
        cplx plus = axis == 0 ? at(cur, i0 + 1, i1) : at(cur, i0, i1 + 1);
        cplx minus = axis == 0 ? at(cur, i0 - 1, i1) : at(cur, i0, i1 - 1);
        next.v[i] = (plus - minus) / (2.0 * g.h);
      }
      cur = std::move(next);
    }
  }
  return cur;
}

double schwartz_seminorm(const GridFunction& f, int N) {
  if (N < 0 || N > 4)
    throw std::invalid_argument("schwartz_seminorm: order must be in [0, 4]");
  const Grid& g = f.grid;
  std::vector<GridFunction> deriv;
  for (int g0 = 0; g0 <= N; ++g0) {
    for (int g1 = 0; g1 <= (g.n == 2 ? N - g0 : 0); ++g1) {
      if (g.n == 1 && g1 > 0) continue;
      deriv.push_back(finite_difference(f, {g0, g1}));
    }
  }
  double best = 0.0;
  for (std::int64_t i = 0; i < g.size(); ++i) {
    double s = 0.0;
    for (const auto& d : deriv) s += std::abs(d.v[i]);
    best = std::max(best, std::pow(1.0 + g.radius(i), N) * s);
  }
  return best;
}

GridFunction fourier_transform(const GridFunction& f) {
  const Grid& g = f.grid;
  Grid fg = g.fourierGrid();
  std::vector<cplx> F = f.v;
  dft(F, g, -1);
  GridFunction out(fg);
  // Reorder to increasing frequency and attach the left-endpoint phase
  // e^{i A xi} per axis (samples start at x = -A).
  for (std::int64_t i = 0; i < fg.size(); ++i) {
    auto [s0, s1] = fg.split(i);           // shifted index, xi = -pi/h + s*hxi
    int k0 = (s0 + g.N / 2) % g.N;         // DFT bin
    int k1 = (s1 + g.N / 2) % g.N;
    double xi0 = dft_frequency(g, k0);
    double xi1 = g.n == 2 ? dft_frequency(g, k1) : 0.0;
    cplx phase = std::exp(cplx{0.0, g.A * (xi0 + xi1)});
    out.v[i] = g.cellVolume() * phase * F[g.flatten(k0, g.n == 2 ? k1 : 0)];
  }
  return out;
}

GridFunction inverse_fourier_transform(const GridFunction& fhat) {
  const Grid& fg = fhat.grid;
  double h = std::numbers::pi / fg.A;  // spatial step of the original grid
  Grid g = Grid::make(fg.n, fg.N * h / 2.0, fg.N);
  std::vector<cplx> F(g.size());
  for (std::int64_t i = 0; i < fg.size(); ++i) {
    auto [s0, s1] = fg.split(i);
    int k0 = (s0 + g.N / 2) % g.N;
    int k1 = (s1 + g.N / 2) % g.N;
    double xi0 = dft_frequency(g, k0);
    double xi1 = g.n == 2 ? dft_frequency(g, k1) : 0.0;
    cplx phase = std::exp(cplx{0.0, -g.A * (xi0 + xi1)});
    F[g.flatten(k0, g.n == 2 ? k1 : 0)] = phase * fhat.v[i] / g.cellVolume();
  }
  dft(F, g, +1);
  GridFunction out(g);
  double scale = 1.0 / static_cast<double>(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) out.v[i] = scale * F[i];
  return out;
}

GridFunction apply_multiplier(const GridFunction& f, const std::vector<cplx>& mhat) {
  if (static_cast<std::int64_t>(mhat.size()) != f.grid.size())
    throw std::invalid_argument("apply_multiplier: multiplier size mismatch");
  std::vector<cplx> F = f.v;
  dft(F, f.grid, -1);
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= mhat[i];
  dft(F, f.grid, +1);
  GridFunction out(f.grid);
  double scale = 1.0 / static_cast<double>(f.grid.size());
  for (std::int64_t i = 0; i < f.grid.size(); ++i) out.v[i] = scale * F[i];
  return out;
}

std::vector<cplx> radial_multiplier(const Grid& g,
                                    const std::function<double(double)>& profile) {
  std::vector<cplx> m(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto [k0, k1] = g.split(i);
    double xi0 = dft_frequency(g, k0);
    double xi1 = g.n == 2 ? dft_frequency(g, k1) : 0.0;
    m[i] = profile(g.n == 1 ? std::abs(xi0) : std::hypot(xi0, xi1));
  }
  return m;
}

}  // namespace varexp
