#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace varexp {

using cplx = std::complex<double>;

/// Uniform sampling grid on the box [-A, A]^n with n in {1, 2}.
///
/// Per axis the sample points are x_i = -A + i*h, i = 0..N-1, h = 2A/N,
/// so the right boundary +A is excluded (periodic layout; functions of
/// interest decay before the boundary).  Multi-dimensional samples are
/// stored row-major with the last axis fastest, matching FFTW.
struct Grid {
  int n = 1;
  double A = 8.0;
  int N = 4096;
  double h = 2.0 * 8.0 / 4096;

  static Grid make(int n, double A, int N);

  std::int64_t size() const;                      // N^n
  double cellVolume() const;                      // h^n
  double axisCoord(int i) const { return -A + i * h; }
  std::array<int, 2> split(std::int64_t idx) const;
  std::int64_t flatten(int i0, int i1) const;
  std::array<double, 2> point(std::int64_t idx) const;
  double radius(std::int64_t idx) const;          // |x| (Euclidean)

  /// Grid of the discrete frequencies: box [-pi/h, pi/h)^n, same N.
  Grid fourierGrid() const;

  bool operator==(const Grid&) const = default;
};

/// Complex-valued samples on a Grid.
struct GridFunction {
  Grid grid;
  std::vector<cplx> v;

  GridFunction() = default;
  explicit GridFunction(const Grid& g);
  GridFunction(const Grid& g, std::vector<cplx> values);

  static GridFunction sample(const Grid& g,
                             const std::function<cplx(double, double)>& f);

  cplx& operator[](std::int64_t i) { return v[i]; }
  const cplx& operator[](std::int64_t i) const { return v[i]; }
  std::int64_t size() const { return static_cast<std::int64_t>(v.size()); }

  double absMax() const;
  bool isZero() const;
  void checkFinite(const char* what) const;   // throws on NaN/Inf samples

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(cplx c);
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(cplx c, GridFunction a);

/// Pointwise |f|.
GridFunction abs(const GridFunction& f);
/// Pointwise product.
GridFunction pointwiseMul(const GridFunction& a, const GridFunction& b);

/// Dyadic cube Q_{jm} = 2^{-j}([0,1)^n + m), i.e. side 2^{-j}, "center"
/// 2^{-j}m in the convention used throughout: the cube around lattice
/// point 2^{-j}m is [2^{-j}(m_i - 1/2), 2^{-j}(m_i + 1/2)].
struct DyadicCube {
  int j = 0;
  std::array<std::int64_t, 2> m{0, 0};

  double side() const;
  std::array<double, 2> center() const;
  /// Half-width of the concentric scaled cube d*Q.
  double scaledHalfWidth(double d) const;
};

/// Characteristic function of the closed cube Q_{jm} sampled on g.
/// Requires j >= 0, resolution h <= 2^{-j}/4 and the cube to meet the box.
GridFunction cube_indicator(const Grid& g, const DyadicCube& q);

/// Rectangle-rule integral h^n * sum of samples.
cplx integrate(const GridFunction& f);

/// Linear (zero-padded) convolution h^n * sum_y f(x-y) g(y), sampled on
/// the common grid.  Zero padding to 2N per axis avoids periodic
/// wrap-around; mass of f*g outside the box is discarded.
GridFunction convolve(const GridFunction& f, const GridFunction& g);

/// eta_{nu,R}(x) = 2^{n nu} (1 + 2^nu |x|)^{-R} sampled on g.
GridFunction eta_kernel(const Grid& g, int nu, double R);

/// Iterated central finite difference, order[a] first differences along
/// axis a, step h, zero extension outside the box.
GridFunction finite_difference(const GridFunction& f, std::array<int, 2> order);

/// max_x (1+|x|)^N * sum_{|gamma| <= N} |D^gamma f(x)|  (Schwartz-type
/// seminorm with finite-difference derivatives).  Requires 0 <= N <= 4.
double schwartz_seminorm(const GridFunction& f, int N);

/// Discrete Fourier transform as samples of fhat(xi) = integral of
/// f(x) e^{-i x.xi} dx on the fourierGrid(), frequencies in increasing
/// order per axis.
GridFunction fourier_transform(const GridFunction& f);

/// Inverse of fourier_transform (round trip is identity to rounding).
GridFunction inverse_fourier_transform(const GridFunction& fhat);

/// Applies a Fourier multiplier given by samples in DFT index order.
GridFunction apply_multiplier(const GridFunction& f, const std::vector<cplx>& mhat);

/// Multiplier samples m(xi_k) in DFT index order for a radial profile.
std::vector<cplx> radial_multiplier(const Grid& g, const std::function<double(double)>& profile);

/// Signed frequency for DFT bin k (one axis).
double dft_frequency(const Grid& g, int k);

/// Raw DFT (no quadrature scaling), in place; sign = -1 forward, +1 inverse.
/// Inverse is unnormalised (scale by 1/N^n yourself if needed).
void dft(std::vector<cplx>& data, const Grid& g, int sign);

}  // namespace varexp
