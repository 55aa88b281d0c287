#include "bwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bwave/fft.hpp"

namespace bwave {

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

Grid::Grid(std::size_t n, double length) : n_(n), length_(length) {
  if (n_ < 16 || n_ % 2 != 0) throw std::invalid_argument("grid size must be even and >= 16");
  if (!(length_ > 0.0) || !std::isfinite(length_)) {
    throw std::invalid_argument("grid length must be positive and finite");
  }
}

double Grid::x(std::size_t j) const {
  return -0.5 * length_ + static_cast<double>(j) * spacing();
}

std::vector<double> Grid::abscissae() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

double Grid::wavenumber(std::size_t m) const {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / length_;
}

// ---- Field -----------------------------------------------------------------

Field::Field(Grid grid) : grid_(grid), samples_(grid.size(), 0.0) {}

Field::Field(Grid grid, std::vector<double> samples) : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    throw std::invalid_argument("sample count does not match the grid");
  }
  for (double v : samples_) {
    if (!std::isfinite(v)) throw std::invalid_argument("field samples must be finite");
  }
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double Field::max() const { return *std::max_element(samples_.begin(), samples_.end()); }
double Field::min() const { return *std::min_element(samples_.begin(), samples_.end()); }

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] += other.samples_[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] -= other.samples_[j];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : samples_) v *= s;
  return *this;
}

Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
Field operator*(double s, Field u) { return u *= s; }
Field operator-(Field u) { return u *= -1.0; }

Field hadamard(const Field& u, const Field& v) {
  require_same_grid(u.grid(), v.grid());
  Field out(u.grid());
  for (std::size_t j = 0; j < u.size(); ++j) out[j] = u[j] * v[j];
  return out;
}

FieldPair::FieldPair(Field f_, Field g_) : f(std::move(f_)), g(std::move(g_)) {
  require_same_grid(f.grid(), g.grid());
}

FieldPair operator+(const FieldPair& p, const FieldPair& q) { return {p.f + q.f, p.g + q.g}; }
FieldPair operator-(const FieldPair& p, const FieldPair& q) { return {p.f - q.f, p.g - q.g}; }
FieldPair operator*(double s, const FieldPair& p) { return {s * p.f, s * p.g}; }

// ---- Spectral calculus -----------------------------------------------------

std::vector<std::complex<double>> spectrum(const Field& u) {
  auto& fft = detail::thread_fft(u.size());
  std::vector<std::complex<double>> coeffs(fft.modes());
  fft.forward(u.samples(), coeffs);
  return coeffs;
}

Field from_spectrum(const Grid& grid, std::span<const std::complex<double>> coeffs) {
  if (coeffs.size() != grid.modes()) throw std::invalid_argument("spectrum size mismatch");
  auto& fft = detail::thread_fft(grid.size());
  Field out(grid);
  fft.inverse(coeffs, out.samples());
  return out;
}

Field apply_multiplier(const Field& u,
                       const std::function<std::complex<double>(double, std::size_t)>& mult) {
  auto coeffs = spectrum(u);
  const Grid& g = u.grid();
  for (std::size_t m = 0; m < coeffs.size(); ++m) coeffs[m] *= mult(g.wavenumber(m), m);
  return from_spectrum(g, coeffs);
}

Field derivative(const Field& u, int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("derivative order must be 1, 2 or 3");
  const std::size_t nyquist = u.grid().size() / 2;
  return apply_multiplier(u, [order, nyquist](double k, std::size_t m) -> std::complex<double> {
    if (m == nyquist && order % 2 == 1) return 0.0;
    switch (order) {
      case 1: return {0.0, k};
      case 2: return -k * k;
      default: return {0.0, -k * k * k};
    }
  });
}

double integral(const Field& u) {
  double s = 0.0;
  for (double v : u.samples()) s += v;
  return s * u.grid().spacing();
}

double inner(const Field& u, const Field& v) {
  require_same_grid(u.grid(), v.grid());
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) s += u[j] * v[j];
  return s * u.grid().spacing();
}

double l2_norm_sq(const Field& u) {
  double s = 0.0;
  for (double v : u.samples()) s += v * v;
  return s * u.grid().spacing();
}

double lp_norm(const Field& u, double p) {
  if (std::isinf(p)) return u.max_abs();
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p >= 1");
  if (p == 2.0) return std::sqrt(l2_norm_sq(u));
  double s = 0.0;
  for (double v : u.samples()) s += std::pow(std::abs(v), p);
  return std::pow(s * u.grid().spacing(), 1.0 / p);
}

double spectral_l2_norm_sq(const Field& u) {
  const auto coeffs = spectrum(u);
  const std::size_t nyquist = u.size() / 2;
  double s = std::norm(coeffs[0]) + std::norm(coeffs[nyquist]);
  for (std::size_t m = 1; m < nyquist; ++m) s += 2.0 * std::norm(coeffs[m]);
  return s * u.grid().spacing() / static_cast<double>(u.size());
}

double dirichlet_inner(const Field& u, const Field& v) {
  require_same_grid(u.grid(), v.grid());
  const auto cu = spectrum(u);
  const auto cv = spectrum(v);
  const Grid& g = u.grid();
  const std::size_t nyquist = g.size() / 2;
  double s = 0.0;
  for (std::size_t m = 1; m < nyquist; ++m) {
    const double k = g.wavenumber(m);
    s += 2.0 * k * k * (cu[m] * std::conj(cv[m])).real();
  }
  const double kn = g.wavenumber(nyquist);
  s += kn * kn * (cu[nyquist] * std::conj(cv[nyquist])).real();
  return s * g.spacing() / static_cast<double>(g.size());
}

double dirichlet_energy(const Field& u) { return dirichlet_inner(u, u); }

Field shift(const Field& u, double s) {
  const double length = u.grid().length();
  double r = std::fmod(s, length);
  if (r < 0.0) r += length;
  if (r == 0.0) return u;
  return apply_multiplier(u, [r](double k, std::size_t) { return std::polar(1.0, -k * r); });
}

std::vector<double> interpolate(const Field& u, std::span<const double> points) {
  const Grid& g = u.grid();
  const auto coeffs = spectrum(u);
  const std::size_t nyquist = g.size() / 2;
  const double inv_n = 1.0 / static_cast<double>(g.size());
  std::vector<double> weight(coeffs.size(), 2.0 * inv_n);
  weight[0] = inv_n;
  weight[nyquist] = inv_n;

  constexpr std::size_t kReanchor = 32;
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double theta = 2.0 * std::numbers::pi * (points[i] - g.x(0)) / g.length();
    const std::complex<double> step = std::polar(1.0, theta);
    std::complex<double> z = 1.0;
    double acc = 0.0;
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
      if (m % kReanchor == 0) z = std::polar(1.0, theta * static_cast<double>(m));
      acc += weight[m] * (coeffs[m].real() * z.real() - coeffs[m].imag() * z.imag());
      z *= step;
    }
    out[i] = acc;
  }
  return out;
}

Field resample(const Field& u, const Grid& target, double scale, double tail_floor) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("resample scale must be positive");
  }
  if (scale == 1.0 && target == u.grid()) return u;

  const Grid& src = u.grid();
  const double lo = src.x(0);
  const double hi = lo + src.length();
  std::vector<double> inside;
  std::vector<std::size_t> index;
  inside.reserve(target.size());
  for (std::size_t j = 0; j < target.size(); ++j) {
    const double p = target.x(j) / scale;
    if (p >= lo && p < hi) {
      inside.push_back(p);
      index.push_back(j);
    }
  }
  if (inside.size() < target.size()) {
    const std::size_t n = src.size();
    const double tail = std::max({std::abs(u[0]), std::abs(u[1]), std::abs(u[n - 1])});
    if (tail > tail_floor * u.max_abs()) {
      throw std::domain_error("resample: target extends past a source domain whose tail is not negligible");
    }
  }
  const auto values = interpolate(u, inside);
  Field out(target);
  for (std::size_t i = 0; i < index.size(); ++i) out[index[i]] = values[i];
  return out;
}

}  // namespace bwave
