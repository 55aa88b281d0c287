#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bwave {

/// Uniform periodic grid on [-L/2, L/2) with n samples, n even and >= 16.
/// Sample j sits at x_j = -L/2 + j*L/n, so index n/2 is the origin.
class Grid {
 public:
  Grid(std::size_t n, double length);

  std::size_t size() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / static_cast<double>(n_); }
  std::size_t center() const { return n_ / 2; }
  std::size_t modes() const { return n_ / 2 + 1; }

  double x(std::size_t j) const;
  std::vector<double> abscissae() const;

  /// Wavenumber 2*pi*m/L of real-to-complex mode m in [0, n/2].
  double wavenumber(std::size_t m) const;

  bool operator==(const Grid& other) const = default;

 private:
  std::size_t n_;
  double length_;
};

/// Real samples on a grid.
class Field {
 public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<double> samples);

  template <typename F>
  static Field from_function(const Grid& grid, F&& fn) {
    std::vector<double> s(grid.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = fn(grid.x(j));
    return Field(grid, std::move(s));
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return samples_.size(); }
  std::span<const double> samples() const { return samples_; }
  std::span<double> samples() { return samples_; }
  const std::vector<double>& values() const { return samples_; }

  double operator[](std::size_t j) const { return samples_[j]; }
  double& operator[](std::size_t j) { return samples_[j]; }

  double max_abs() const;
  double max() const;
  double min() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

 private:
  Grid grid_;
  std::vector<double> samples_;
};

Field operator+(Field lhs, const Field& rhs);
Field operator-(Field lhs, const Field& rhs);
Field operator*(double s, Field u);
Field operator-(Field u);
/// Pointwise product.
Field hadamard(const Field& u, const Field& v);

/// A pair (f, g) on one grid.
struct FieldPair {
  FieldPair(Field f_, Field g_);

  const Grid& grid() const { return f.grid(); }

  Field f;
  Field g;
};

FieldPair operator+(const FieldPair& p, const FieldPair& q);
FieldPair operator-(const FieldPair& p, const FieldPair& q);
FieldPair operator*(double s, const FieldPair& p);

// ---- Spectral calculus -----------------------------------------------------

/// Spectral derivative of order 1, 2 or 3. The Nyquist mode is dropped for
/// odd orders. Throws std::invalid_argument for any other order.
Field derivative(const Field& u, int order);

/// Applies a mode-wise Fourier multiplier. `mult(k, m)` receives the
/// wavenumber and mode index m in [0, n/2].
Field apply_multiplier(const Field& u,
                       const std::function<std::complex<double>(double, std::size_t)>& mult);

std::vector<std::complex<double>> spectrum(const Field& u);
Field from_spectrum(const Grid& grid, std::span<const std::complex<double>> coeffs);

double integral(const Field& u);
double inner(const Field& u, const Field& v);
double l2_norm_sq(const Field& u);
/// p in {2, 3, 4} (or any p >= 1), or infinity for the max norm.
double lp_norm(const Field& u, double p);
/// l2_norm_sq evaluated on the Fourier side.
double spectral_l2_norm_sq(const Field& u);

/// int u'v' computed as sum k^2 Re(u_k conj(v_k)), Nyquist included, so that
/// dirichlet_inner(u, u) == -inner(u, derivative(u, 2)) exactly in exact
/// arithmetic.
double dirichlet_inner(const Field& u, const Field& v);
double dirichlet_energy(const Field& u);

/// u(x - s) with periodic wraparound, via the phase factor exp(-i k s).
Field shift(const Field& u, double s);

/// Evaluates the trigonometric interpolant of u at x_j / scale for every
/// target abscissa x_j. Points that fall outside the source domain read as
/// zero, which is only allowed when the source tail is below
/// tail_floor * max|u|; otherwise std::domain_error. scale <= 0 throws
/// std::invalid_argument.
Field resample(const Field& u, const Grid& target, double scale, double tail_floor = 1e-10);

/// Trigonometric interpolant of u at arbitrary points.
std::vector<double> interpolate(const Field& u, std::span<const double> points);

}  // namespace bwave
