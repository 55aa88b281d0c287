#include "bwave/functional.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bwave {

namespace {

double cross_term(const Field& f, const Field& g) {
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * f[j] * g[j];
  return s * f.grid().spacing();
}

double cube_norm(const Field& h) {
  double s = 0.0;
  for (double v : h.samples()) s += std::abs(v) * v * v;
  return s * h.grid().spacing();
}

void require_regime(double a, double c) {
  if (!(a < 0.0) || !(c < 0.0)) throw std::invalid_argument("requires a < 0 and c < 0");
}

}  // namespace

VariationalValue tau(const FieldPair& p, double a, double c) {
  VariationalValue v;
  v.grad_f_sq = dirichlet_energy(p.f);
  v.grad_g_sq = dirichlet_energy(p.g);
  v.cross = cross_term(p.f, p.g);
  v.pair_inner = inner(p.f, p.g);
  v.n_value = l2_norm_sq(p.f) + l2_norm_sq(p.g);
  v.tau = -a * v.grad_f_sq - c * v.grad_g_sq + v.cross + 2.0 * v.pair_inner;
  return v;
}

FieldPair grad(const FieldPair& p, double a, double c) {
  const Field fxx = derivative(p.f, 2);
  const Field gxx = derivative(p.g, 2);
  Field df(p.grid());
  Field dg(p.grid());
  for (std::size_t j = 0; j < df.size(); ++j) {
    const double f = p.f[j];
    const double g = p.g[j];
    df[j] = 2.0 * (a * fxx[j] + f * g + g);
    dg[j] = 2.0 * (c * gxx[j] + 0.5 * f * f + f);
  }
  return {std::move(df), std::move(dg)};
}

double mass(const FieldPair& p) { return l2_norm_sq(p.f) + l2_norm_sq(p.g); }

double tau_increment(const FieldPair& p, const FieldPair& delta, double a, double c) {
  const Field& f = p.f;
  const Field& g = p.g;
  const Field& df = delta.f;
  const Field& dg = delta.g;
  const double quad = -a * dirichlet_inner(df, 2.0 * f + df) - c * dirichlet_inner(dg, 2.0 * g + dg);
  double coupling = 0.0;
  double cubic = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double gn = g[j] + dg[j];
    coupling += df[j] * gn + f[j] * dg[j];
    cubic += (2.0 * f[j] + df[j]) * df[j] * gn + f[j] * f[j] * dg[j];
  }
  const double dx = f.grid().spacing();
  return quad + (2.0 * coupling + cubic) * dx;
}

double mass_increment(const FieldPair& p, const FieldPair& delta) {
  double s = 0.0;
  for (std::size_t j = 0; j < p.f.size(); ++j) {
    s += delta.f[j] * (2.0 * p.f[j] + delta.f[j]) + delta.g[j] * (2.0 * p.g[j] + delta.g[j]);
  }
  return s * p.grid().spacing();
}

double lower_bound_argmin(double a, double mu) {
  if (!(a < 0.0) || !(mu > 0.0)) throw std::invalid_argument("lower bound needs a < 0, mu > 0");
  return std::cbrt(std::pow(mu, 2.5) / (4.0 * std::abs(a)));
}

double lower_bound_m(double a, double mu) {
  const double x = lower_bound_argmin(a, mu);
  return std::abs(a) * x * x * x * x - std::pow(mu, 2.5) * x - 2.0 * mu;
}

SeedProfile parse_seed_profile(const std::string& name) {
  if (name == "gaussian") return SeedProfile::Gaussian;
  if (name == "sech") return SeedProfile::Sech;
  throw std::invalid_argument("unknown seed profile '" + name + "'");
}

std::string to_string(SeedProfile s) { return s == SeedProfile::Gaussian ? "gaussian" : "sech"; }

Grid seed_grid() { return Grid(2048, 80.0); }

Field seed_profile(SeedProfile kind) {
  const Grid g = seed_grid();
  if (kind == SeedProfile::Gaussian) {
    const double norm = std::pow(std::numbers::pi, -0.25);
    return Field::from_function(g, [norm](double x) { return norm * std::exp(-0.5 * x * x); });
  }
  return Field::from_function(g, [](double x) { return std::numbers::sqrt2 * 0.5 / std::cosh(x); });
}

UpperBound upper_bound_m(double a, double c, double mu, const Field& h) {
  require_regime(a, c);
  if (!(mu > 0.0)) throw std::invalid_argument("upper bound needs mu > 0");
  const double s_coef = std::abs(a) + std::abs(c);
  const double dh = dirichlet_energy(h);
  const double k = cube_norm(h) / (2.0 * std::numbers::sqrt2);
  const double mu53 = std::pow(mu, 5.0 / 3.0);

  UpperBound ub;
  ub.lambda_scale = std::cbrt(k / (4.0 * s_coef * dh));
  const double s = ub.lambda_scale;
  ub.bound = mu53 * s * (s * s * s * s_coef * dh - k);
  ub.c1 = -ub.bound * std::cbrt(s_coef) / mu53;
  return ub;
}

FieldPair trial_pair(const Field& h, double lambda_scale, double mu, const Grid& grid) {
  if (std::abs(std::sqrt(l2_norm_sq(h)) - 1.0) > 1e-6) {
    throw std::invalid_argument("seed profile must have unit L2 norm");
  }
  if (!(lambda_scale > 0.0)) throw std::invalid_argument("lambda_scale must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");

  const double dilation = lambda_scale * lambda_scale * std::cbrt(mu);
  Field f = resample(h, grid, 1.0 / dilation);
  f *= std::pow(mu, 2.0 / 3.0) * lambda_scale / std::numbers::sqrt2;
  Field g = -f;
  return {std::move(f), std::move(g)};
}

double trial_tau(double a, double c, double mu, double lambda_scale, const Field& h) {
  const double s_coef = std::abs(a) + std::abs(c);
  const double s = lambda_scale;
  const double k = cube_norm(h) / (2.0 * std::numbers::sqrt2);
  return std::pow(mu, 5.0 / 3.0) * (0.5 * s_coef * s * s * s * s * dirichlet_energy(h) - s * k) - mu;
}

double mu0(double a, double c, double c1) {
  if (!(c1 > 0.0)) throw std::invalid_argument("C1 must be positive");
  return std::pow(2.0, 1.5) * std::pow(c1, -1.5) * std::sqrt(std::abs(a) + std::abs(c));
}

BoundsReport bounds_report(double a, double c, double mu, const Field& h) {
  BoundsReport b;
  b.lower = lower_bound_m(a, mu);
  const UpperBound ub = upper_bound_m(a, c, mu, h);
  b.upper = ub.bound;
  b.c1 = ub.c1;
  b.mu0 = mu0(a, c, ub.c1);
  return b;
}

double hamiltonian(const FieldPair& p, double a, double c) {
  const double quad = -a * dirichlet_energy(p.f) - c * dirichlet_energy(p.g) + l2_norm_sq(p.f) +
                      l2_norm_sq(p.g);
  return 0.5 * (quad + cross_term(p.f, p.g));
}

double invariant_momentum(const FieldPair& p) { return inner(p.f, p.g); }

}  // namespace bwave
