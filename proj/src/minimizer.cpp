#include "bwave/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bwave/rearrange.hpp"

namespace bwave {

namespace {

double max_abs(const FieldPair& p) { return std::max(p.f.max_abs(), p.g.max_abs()); }

// 0.5 * grad tau - lambda * p, i.e. the defect of the Euler-Lagrange system.
FieldPair lagrange_defect(const FieldPair& gradient, const FieldPair& p, double lambda) {
  return {0.5 * gradient.f - lambda * p.f, 0.5 * gradient.g - lambda * p.g};
}

double rayleigh(const FieldPair& gradient, const FieldPair& p) {
  return (inner(gradient.f, p.f) + inner(gradient.g, p.g)) / (2.0 * mass(p));
}

FieldPair normalized(FieldPair p, double mu) {
  const double s = std::sqrt(mu / mass(p));
  p.f *= s;
  p.g *= s;
  return p;
}

// Change of the Lagrangian tau - lambda N. On the sphere this equals the
// change of tau; unlike a difference of two tau values it does not pick up
// the O(eps * lambda * mu) error of rounding each iterate back onto N = mu.
double lagrangian_increment(const FieldPair& p, const FieldPair& next, double lambda, double a,
                            double c) {
  const FieldPair delta = next - p;
  return tau_increment(p, delta, a, c) - lambda * mass_increment(p, delta);
}

}  // namespace

void MinimizerConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("solver.tol must be positive");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw std::invalid_argument("solver.backtrack_factor must lie in (0, 1)");
  }
  if (!(step0 > 0.0) || !(min_step > 0.0) || !(min_step < step0)) {
    throw std::invalid_argument("solver steps must satisfy 0 < min_step < step0");
  }
  if (!(step_growth >= 1.0)) throw std::invalid_argument("solver.step_growth must be >= 1");
  if (!(max_step >= step0)) throw std::invalid_argument("solver.max_step must be >= step0");
}

std::string to_string(MinimizerStatus s) {
  switch (s) {
    case MinimizerStatus::Converged: return "converged";
    case MinimizerStatus::NonConvergence: return "non_convergence";
    case MinimizerStatus::CollapseToZero: return "collapse_to_zero";
  }
  return "unknown";
}

double residual(const FieldPair& p, double lambda, double a, double c) {
  return max_abs(lagrange_defect(grad(p, a, c), p, lambda));
}

double rayleigh_multiplier(const FieldPair& p, double a, double c) {
  return rayleigh(grad(p, a, c), p);
}

double linear_decay_rate(double a, double c, double omega) {
  if (!(std::abs(omega) < 1.0)) throw std::invalid_argument("decay rate needs |omega| < 1");
  const double pa = std::abs(a);
  const double pc = std::abs(c);
  const double disc = (pa - pc) * (pa - pc) + 4.0 * pa * pc * omega * omega;
  const double s = 2.0 * (1.0 - omega * omega) / (pa + pc + std::sqrt(disc));
  return std::sqrt(s);
}

Grid auto_minimizer_grid(double a, double c, double mu, std::size_t n, double decay_lengths,
                         const Field& seed) {
  if (!(decay_lengths > 0.0)) throw std::invalid_argument("decay_lengths must be positive");
  const UpperBound ub = upper_bound_m(a, c, mu, seed);
  const double width = 1.0 / (ub.lambda_scale * ub.lambda_scale * std::cbrt(mu));
  const Grid provisional(n, 40.0 * width);
  const FieldPair trial = trial_pair(seed, ub.lambda_scale, mu, provisional);

  // A genuine minimizer has lambda < -1; clamp the estimate away from the
  // vanishing regime so the box stays finite.
  const double lambda = std::min(rayleigh_multiplier(trial, a, c), -2.0);
  const double omega = 1.0 / lambda;
  const double slow = linear_decay_rate(a, c, omega);
  // The two roots multiply to (1 - omega^2) / (|a||c|).
  const double fast = std::sqrt((1.0 - omega * omega) / (std::abs(a) * std::abs(c))) / slow;
  const double root = std::sqrt(-lambda);
  // Sized on the fast scale: a wide box keeps k_max, and with it the roundoff
  // in f'', low; a short core component still gets enough samples. The slow
  // tail must still fit kMinTailLengths e-foldings.
  constexpr double kMinTailLengths = 40.0;
  return Grid(n, std::max({2.0 * decay_lengths / (fast * root),
                           2.0 * kMinTailLengths / (slow * root), 20.0 * width}));
}

MinimizerResult minimize(double a, double c, double mu, const Grid& grid,
                         const MinimizerConfig& cfg) {
  return minimize(a, c, mu, grid, cfg, seed_profile(SeedProfile::Gaussian));
}

MinimizerResult minimize(double a, double c, double mu, const Grid& grid,
                         const MinimizerConfig& cfg, const Field& seed) {
  cfg.validate();
  if (!(a < 0.0) || !(c < 0.0)) throw std::invalid_argument("minimize requires a < 0 and c < 0");
  if (!(mu > 0.0)) throw std::invalid_argument("minimize requires mu > 0");

  double scale = upper_bound_m(a, c, mu, seed).lambda_scale;
  FieldPair p = normalized(trial_pair(seed, scale, mu, grid), mu);
  double energy = tau(p, a, c).tau;
  // Negative starting energy keeps the descent away from the zero state.
  for (int attempt = 0; energy >= 0.0 && attempt < 60; ++attempt) {
    scale *= 0.5;
    p = normalized(trial_pair(seed, scale, mu, grid), mu);
    energy = tau(p, a, c).tau;
  }

  std::vector<double> precond_f(grid.modes(), 1.0);
  std::vector<double> precond_g(grid.modes(), 1.0);
  if (cfg.precondition) {
    for (std::size_t m = 0; m < grid.modes(); ++m) {
      const double k2 = grid.wavenumber(m) * grid.wavenumber(m);
      precond_f[m] = 1.0 / (1.0 + std::abs(a) * k2);
      precond_g[m] = 1.0 / (1.0 + std::abs(c) * k2);
    }
  }
  auto precondition = [](const Field& u, const std::vector<double>& weights) {
    return apply_multiplier(u, [&weights](double, std::size_t m) { return weights[m]; });
  };

  MinimizerResult out{.pair = p, .history = {}};
  out.mu = mu;
  out.initial_lambda_scale = scale;
  out.history.reserve(std::min<std::size_t>(cfg.max_iter + 1, 1 << 16));

  double step = cfg.step0;
  double res = 0.0;
  std::size_t it = 0;
  for (;; ++it) {
    const FieldPair gradient = grad(p, a, c);
    const double lambda = rayleigh(gradient, p);
    const FieldPair defect = lagrange_defect(gradient, p, lambda);
    res = max_abs(defect);
    out.history.push_back({energy, res});
    if (res <= cfg.tol || it >= cfg.max_iter) break;

    if (cfg.rearrange_every > 0 && it > 0 && it % cfg.rearrange_every == 0) {
      const FieldPair projected = project_pair(p);
      const double d = lagrangian_increment(p, projected, lambda, a, c);
      if (d <= 0.0) {
        p = projected;
        energy += d;
        ++out.rearrangements_accepted;
        continue;
      }
    }

    const FieldPair direction{precondition(defect.f, precond_f), precondition(defect.g, precond_g)};
    bool accepted = false;
    while (step >= cfg.min_step) {
      FieldPair candidate = normalized(p - step * direction, mu);
      const double d = lagrangian_increment(p, candidate, lambda, a, c);
      if (d <= 0.0) {
        p = std::move(candidate);
        energy += d;
        step = std::min(step * cfg.step_growth, cfg.max_step);
        accepted = true;
        break;
      }
      step *= cfg.backtrack_factor;
    }
    if (!accepted) break;
  }
  out.iterations = it;

  // Final rearrangement, kept only if it does not raise the energy.
  {
    const double lambda = rayleigh_multiplier(p, a, c);
    const FieldPair projected = project_pair(p);
    const double d = lagrangian_increment(p, projected, lambda, a, c);
    if (d <= 0.0) {
      p = projected;
      ++out.rearrangements_accepted;
    }
  }

  const FieldPair gradient = grad(p, a, c);
  out.lambda = rayleigh(gradient, p);
  out.residual = max_abs(lagrange_defect(gradient, p, out.lambda));
  const double lf = 0.5 * inner(gradient.f, p.f) / l2_norm_sq(p.f);
  const double lg = 0.5 * inner(gradient.g, p.g) / l2_norm_sq(p.g);
  out.lambda_gap = std::abs(lf - lg);
  out.m_value = tau(p, a, c).tau;
  out.pair = std::move(p);

  if (std::abs(out.m_value) <= 2.0 * mu) {
    out.status = MinimizerStatus::CollapseToZero;
  } else if (out.residual <= cfg.tol) {
    out.status = MinimizerStatus::Converged;
  } else {
    out.status = MinimizerStatus::NonConvergence;
  }
  return out;
}

}  // namespace bwave
