#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bwave/grid.hpp"
#include "bwave/minimizer.hpp"

namespace bwave {

// Traveling-wave profile (u, eta) = (phi(x - omega t), psi(x - omega t)).
struct Wave {
  Field phi;
  Field psi;
  double omega = 0.0;
  double source_mu = 0.0;
  double source_lambda = 0.0;
};

enum class CheckStatus { Pass, Fail, Skipped };

std::string to_string(CheckStatus s);
inline CheckStatus check(bool ok) { return ok ? CheckStatus::Pass : CheckStatus::Fail; }

using CheckList = std::vector<std::pair<std::string, CheckStatus>>;

struct WaveReport {
  double stationary_residual = 0.0;
  double peak = 0.0;
  double l2_size = 0.0;
  double l2_identity = 0.0;  // mu / |lambda|^{3/2}
  double l2_bound_ratio = 0.0;
  double speed = 0.0;
  double speed_bound = 0.0;
  double decay_alpha_phi = 0.0;
  double decay_alpha_psi = 0.0;
  double decay_fit_residual_phi = 0.0;
  double decay_fit_residual_psi = 0.0;
  double boundary_leak = 0.0;
  double shape_defect = 0.0;
  bool insufficient_tail = false;  // a decay fit had too few samples above the floor
  CheckList flags;

  bool all_pass() const;
};

class InsufficientTail : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid for the rescaled wave: same n, half-length `decay_lengths` decay
/// lengths of the linearized tail at speed 1/lambda.
Grid wave_grid(const MinimizerResult& r, double a, double c, std::size_t n,
               double decay_lengths = 30.0);

/// phi(x) = -f(x / sqrt(-lambda)) / lambda, psi likewise, omega = 1/lambda.
/// Throws std::invalid_argument if lambda >= 0.
Wave build_wave(const MinimizerResult& r, const Grid& target);

/// max(|a phi'' + phi - omega psi + phi psi|_inf, |c psi'' + psi - omega phi + phi^2/2|_inf).
double stationary_residual(const Wave& w, double a, double c);

struct DecayFit {
  double alpha = 0.0;
  double fit_residual = 0.0;  // RMS misfit of log|u|
  std::size_t samples = 0;
};

/// Least-squares slope of log|u| against |x| over the window
/// [lo, hi] * L/2 on each side of the center, averaged over both sides.
/// Throws InsufficientTail when a side has fewer than 8 samples above
/// floor * max|u|.
DecayFit decay_rate(const Field& u, double window_lo = 0.6, double window_hi = 0.9,
                    double floor = 1e-14);

/// The same wave on a grid with the same n and `factor` times the length,
/// padded with zeros. Coarser spacing keeps the stiffest resolved modes out
/// of the time integrator.
Wave widen(const Wave& w, double factor);

/// Largest widening factor (>= 1) for which the 2/3-dealiased band still
/// covers, with a 20% margin, every mode of phi and psi above
/// `floor` * the largest coefficient.
double spectral_widen_factor(const Wave& w, double floor = 1e-14);

/// The mirror solution (-phi, psi) travelling at -omega.
Wave mirror(const Wave& w);

/// Evaluates every wave-level property: stationary system, L2 size and the
/// rescaling identity, the speed bound (1/C1)(|a|+|c|)^{1/3} mu^{-2/3},
/// sign and shape, decay rates and boundary leakage.
WaveReport verify(const Wave& w, double a, double c, double c1);

}  // namespace bwave
