#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bwave/functional.hpp"
#include "bwave/grid.hpp"

namespace bwave {

struct MinimizerConfig {
  double tol = 1e-8;
  std::size_t max_iter = 50000;
  double step0 = 1e-2;
  std::size_t rearrange_every = 50;
  double backtrack_factor = 0.5;
  double min_step = 1e-12;
  // Accepted steps grow by this factor, capped at max_step.
  double step_growth = 1.2;
  double max_step = 10.0;
  // Sobolev preconditioner diag(1 + |a| k^2, 1 + |c| k^2) on the descent
  // direction. Without it the step is limited by |a| k_max^2.
  bool precondition = true;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

enum class MinimizerStatus { Converged, NonConvergence, CollapseToZero };

std::string to_string(MinimizerStatus s);

struct IterationRecord {
  double tau = 0.0;
  double residual = 0.0;
};

struct MinimizerResult {
  FieldPair pair;
  double mu = 0.0;
  double m_value = 0.0;  // tau at the returned pair
  double lambda = 0.0;   // least-squares multiplier over both equations
  double lambda_gap = 0.0;  // |lambda_f - lambda_g| from the two equations separately
  double residual = 0.0;
  std::size_t iterations = 0;
  std::size_t rearrangements_accepted = 0;
  double initial_lambda_scale = 0.0;
  MinimizerStatus status = MinimizerStatus::NonConvergence;
  // Accepted-iterate energies (tau of the start point plus the accumulated
  // accepted increments) and residuals, one entry per iteration.
  std::vector<IterationRecord> history;

  bool converged() const { return status == MinimizerStatus::Converged; }
};

/// max(|a f'' + f g + g - lambda f|_inf, |c g'' + f^2/2 + f - lambda g|_inf).
double residual(const FieldPair& p, double lambda, double a, double c);

/// Multiplier minimizing the discrete l2 norm of the Euler-Lagrange defect,
/// which coincides with the Rayleigh quotient <grad tau, p> / (2 N(p)).
double rayleigh_multiplier(const FieldPair& p, double a, double c);

/// Smallest spatial decay rate of the linearization at zero of the
/// stationary system, sqrt of the smallest root s of (1 - |a| s)(1 - |c| s) = omega^2.
/// Requires |omega| < 1.
double linear_decay_rate(double a, double c, double omega);

/// Grid whose half-length spans `decay_lengths` e-folding lengths of the
/// faster linear tail mode of the expected minimizer (and at least 40 of the
/// slower one), estimated from the trial pair's Rayleigh quotient.
Grid auto_minimizer_grid(double a, double c, double mu, std::size_t n, double decay_lengths,
                         const Field& seed);

/// Projected (optionally preconditioned) gradient descent on N = mu,
/// starting from the trial pair at the optimal scale of upper_bound_m.
/// Non-convergence is reported in the result, not thrown.
MinimizerResult minimize(double a, double c, double mu, const Grid& grid,
                         const MinimizerConfig& cfg, const Field& seed);
MinimizerResult minimize(double a, double c, double mu, const Grid& grid,
                         const MinimizerConfig& cfg);

}  // namespace bwave
