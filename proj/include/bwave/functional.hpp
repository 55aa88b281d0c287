#pragma once

#include <string>

#include "bwave/grid.hpp"

namespace bwave {

// Scalars entering tau(f,g) = -a int f'^2 - c int g'^2 + int f^2 g + 2 int f g.
struct VariationalValue {
  double tau = 0.0;
  double n_value = 0.0;     // N(f,g) = |f|_2^2 + |g|_2^2
  double cross = 0.0;       // int f^2 g
  double pair_inner = 0.0;  // int f g
  double grad_f_sq = 0.0;   // int f'^2
  double grad_g_sq = 0.0;   // int g'^2
};

VariationalValue tau(const FieldPair& p, double a, double c);

/// (d tau/df, d tau/dg) = (2(a f'' + f g + g), 2(c g'' + f^2/2 + f)).
FieldPair grad(const FieldPair& p, double a, double c);

/// N(f,g).
double mass(const FieldPair& p);

/// tau(p + delta) - tau(p), expanded in powers of delta so the result is
/// accurate relative to |delta| rather than to |tau|.
double tau_increment(const FieldPair& p, const FieldPair& delta, double a, double c);
/// N(p + delta) - N(p), expanded the same way.
double mass_increment(const FieldPair& p, const FieldPair& delta);

/// min_{x >= 0} |a| x^4 - mu^{5/2} x - 2 mu, attained at x* = (mu^{5/2}/(4|a|))^{1/3}.
double lower_bound_m(double a, double mu);
double lower_bound_argmin(double a, double mu);

enum class SeedProfile { Gaussian, Sech };

SeedProfile parse_seed_profile(const std::string& name);
std::string to_string(SeedProfile s);

/// Grid on which seed profiles are tabulated.
Grid seed_grid();
/// Unit-L2 even positive profile: pi^{-1/4} exp(-x^2/2) or a normalized sech.
Field seed_profile(SeedProfile kind = SeedProfile::Gaussian);

struct UpperBound {
  double bound = 0.0;         // min over s > 0 of mu^{5/3} s (s^3 S |h'|^2 - |h|_3^3 / (2 sqrt 2))
  double lambda_scale = 0.0;  // the minimizing s
  double c1 = 0.0;            // -bound * S^{1/3} / mu^{5/3}
};

UpperBound upper_bound_m(double a, double c, double mu, const Field& h);

/// f = mu^{2/3} h_s(mu^{1/3} x) / sqrt 2, g = -f, with h_s(x) = s h(s^2 x).
/// Throws std::invalid_argument when |h|_2 differs from 1 by more than 1e-6
/// or lambda_scale <= 0.
FieldPair trial_pair(const Field& h, double lambda_scale, double mu, const Grid& grid);

/// tau of the trial pair in closed form (exact modulo quadrature):
/// mu^{5/3} (S/2 s^4 |h'|^2 - s |h|_3^3 / (2 sqrt 2)) - mu.
double trial_tau(double a, double c, double mu, double lambda_scale, const Field& h);

/// 2^{3/2} C1^{-3/2} sqrt(|a|+|c|). Throws std::invalid_argument if c1 <= 0.
double mu0(double a, double c, double c1);

struct BoundsReport {
  double lower = 0.0;
  double upper = 0.0;
  double c1 = 0.0;
  double mu0 = 0.0;
};

BoundsReport bounds_report(double a, double c, double mu, const Field& h);

/// H = 1/2 int(-a f'^2 - c g'^2 + f^2 + g^2 + f^2 g), conserved by the
/// evolution system with u = f, eta = g.
double hamiltonian(const FieldPair& p, double a, double c);
/// I = int f g.
double invariant_momentum(const FieldPair& p);

}  // namespace bwave
