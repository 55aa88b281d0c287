#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "bwave/grid.hpp"
#include "bwave/wave.hpp"

namespace bwave {

struct EvolveConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  bool dealias = true;
  std::size_t record_every = 10;
  // Test hook: integrate the linear part only.
  bool nonlinear = true;
  double blowup_factor = 1e6;

  void validate() const;
};

struct EvolutionDiagnostics {
  std::vector<double> times;
  std::vector<double> h_values;
  std::vector<double> mass_u;
  std::vector<double> mass_eta;
  std::vector<double> momentum;
  std::vector<double> propagation_error;  // NaN without a reference wave

  std::size_t size() const { return times.size(); }
  double max_propagation_error() const;
  double max_relative_h_drift() const;
  double max_mass_drift_u() const;
  double max_mass_drift_eta() const;
};

class BlowupDetected : public std::runtime_error {
 public:
  BlowupDetected(double time, double magnitude);
  double time() const { return time_; }

 private:
  double time_;
};

/// Integrating-factor RK4 for
///   u_t + eta_x + u u_x + c eta_xxx = 0,
///   eta_t + u_x + (eta u)_x + a u_xxx = 0.
/// The linear part is advanced exactly per mode by its 2x2 propagator; the
/// quadratic terms are evaluated pseudospectrally, with 2/3-rule dealiasing
/// when enabled.
class Evolver {
 public:
  Evolver(const Grid& grid, double a, double c, bool dealias = true, bool nonlinear = true);

  const Grid& grid() const { return grid_; }

  FieldPair step(const FieldPair& state, double dt);

  // Spectral-state interface used by evolve().
  using Spectrum = std::vector<std::complex<double>>;
  void step_spectral(Spectrum& u, Spectrum& eta, double dt);
  void propagate_linear(Spectrum& u, Spectrum& eta, double t) const;

 private:
  void nonlinear_term(const Spectrum& u, const Spectrum& eta, Spectrum& nu, Spectrum& neta);
  void apply_propagator(const Spectrum& u, const Spectrum& eta, Spectrum& out_u,
                        Spectrum& out_eta, double t) const;

  Grid grid_;
  double a_;
  double c_;
  bool dealias_;
  bool nonlinear_;
  std::vector<double> k_;
  std::vector<double> p_;  // k (1 + |c| k^2)
  std::vector<double> q_;  // k (1 + |a| k^2)
  std::vector<double> omega_;
  std::vector<double> mask_;
  std::vector<double> work_u_, work_eta_, work_prod_;
};

FieldPair step(const FieldPair& state, double a, double c, double dt, bool dealias = true);

/// Advances `initial` to cfg.t_final recording diagnostics every
/// cfg.record_every steps and at the end. With a reference wave the
/// propagation error against the rigidly shifted profile is recorded.
/// Throws BlowupDetected.
EvolutionDiagnostics evolve(const FieldPair& initial, double a, double c,
                            const EvolveConfig& cfg, const Wave* reference = nullptr);

/// Evolves and also returns the final state.
EvolutionDiagnostics evolve(const FieldPair& initial, double a, double c,
                            const EvolveConfig& cfg, const Wave* reference,
                            FieldPair* final_state);

/// Displacement-based speed estimate from the peak of the periodic
/// cross-correlation, refined by a parabola through the top three samples.
/// Diagnostic only.
double estimate_speed(const Field& before, const Field& after, double elapsed);

}  // namespace bwave
