#include "bwave/evolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bwave/fft.hpp"
#include "bwave/functional.hpp"

namespace bwave {

namespace {

using Spectrum = Evolver::Spectrum;
constexpr std::complex<double> kI{0.0, 1.0};

void axpy(Spectrum& y, double s, const Spectrum& x) {
  for (std::size_t m = 0; m < y.size(); ++m) y[m] += s * x[m];
}

double spectral_max_bound(const Spectrum& s, std::size_t n) {
  double b = std::abs(s[0]) + std::abs(s.back());
  for (std::size_t m = 1; m + 1 < s.size(); ++m) b += 2.0 * std::abs(s[m]);
  return b / static_cast<double>(n);
}

}  // namespace

void EvolveConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("evolve.dt must be positive");
  if (!(t_final >= dt)) throw std::invalid_argument("evolve.t_final must be >= dt");
  if (record_every == 0) throw std::invalid_argument("evolve.record_every must be >= 1");
}

BlowupDetected::BlowupDetected(double time, double magnitude)
    : std::runtime_error("blow-up detected at t=" + std::to_string(time) +
                         " (max magnitude " + std::to_string(magnitude) + ")"),
      time_(time) {}

double EvolutionDiagnostics::max_propagation_error() const {
  double m = 0.0;
  for (double e : propagation_error) {
    if (std::isnan(e)) continue;
    m = std::max(m, e);
  }
  return m;
}

double EvolutionDiagnostics::max_relative_h_drift() const {
  if (h_values.empty()) return 0.0;
  const double h0 = h_values.front();
  const double scale = h0 != 0.0 ? std::abs(h0) : 1.0;
  double m = 0.0;
  for (double h : h_values) m = std::max(m, std::abs(h - h0) / scale);
  return m;
}

double EvolutionDiagnostics::max_mass_drift_u() const {
  double m = 0.0;
  for (double v : mass_u) m = std::max(m, std::abs(v - mass_u.front()));
  return m;
}

double EvolutionDiagnostics::max_mass_drift_eta() const {
  double m = 0.0;
  for (double v : mass_eta) m = std::max(m, std::abs(v - mass_eta.front()));
  return m;
}

Evolver::Evolver(const Grid& grid, double a, double c, bool dealias, bool nonlinear)
    : grid_(grid), a_(a), c_(c), dealias_(dealias), nonlinear_(nonlinear) {
  if (!(a < 0.0) || !(c < 0.0)) throw std::invalid_argument("evolver requires a < 0 and c < 0");
  const std::size_t modes = grid.modes();
  const std::size_t nyquist = grid.size() / 2;
  k_.resize(modes);
  p_.resize(modes);
  q_.resize(modes);
  omega_.resize(modes);
  mask_.resize(modes);
  for (std::size_t m = 0; m < modes; ++m) {
    // Odd-order operators drop the Nyquist mode.
    const double k = m == nyquist ? 0.0 : grid.wavenumber(m);
    k_[m] = k;
    p_[m] = k * (1.0 + std::abs(c) * k * k);
    q_[m] = k * (1.0 + std::abs(a) * k * k);
    omega_[m] = std::sqrt(p_[m] * q_[m]);
    mask_[m] = (!dealias || 3 * m < grid.size()) && m != nyquist ? 1.0 : 0.0;
  }
  work_u_.resize(grid.size());
  work_eta_.resize(grid.size());
  work_prod_.resize(grid.size());
}

void Evolver::apply_propagator(const Spectrum& u, const Spectrum& eta, Spectrum& out_u,
                               Spectrum& out_eta, double t) const {
  for (std::size_t m = 0; m < u.size(); ++m) {
    const double w = omega_[m];
    const double cs = std::cos(w * t);
    const double sn = w > 0.0 ? std::sin(w * t) / w : t;
    const std::complex<double> um = u[m];
    const std::complex<double> em = eta[m];
    out_u[m] = cs * um - kI * (sn * p_[m]) * em;
    out_eta[m] = cs * em - kI * (sn * q_[m]) * um;
  }
}

void Evolver::propagate_linear(Spectrum& u, Spectrum& eta, double t) const {
  Spectrum ou(u.size()), oe(eta.size());
  apply_propagator(u, eta, ou, oe, t);
  u.swap(ou);
  eta.swap(oe);
}

void Evolver::nonlinear_term(const Spectrum& u, const Spectrum& eta, Spectrum& nu,
                             Spectrum& neta) {
  const std::size_t modes = u.size();
  nu.assign(modes, 0.0);
  neta.assign(modes, 0.0);
  if (!nonlinear_) return;

  auto& fft = detail::thread_fft(grid_.size());
  Spectrum tmp(modes);
  for (std::size_t m = 0; m < modes; ++m) tmp[m] = u[m] * mask_[m];
  fft.inverse(tmp, work_u_);
  for (std::size_t m = 0; m < modes; ++m) tmp[m] = eta[m] * mask_[m];
  fft.inverse(tmp, work_eta_);

  for (std::size_t j = 0; j < work_prod_.size(); ++j) work_prod_[j] = 0.5 * work_u_[j] * work_u_[j];
  fft.forward(work_prod_, nu);
  for (std::size_t j = 0; j < work_prod_.size(); ++j) work_prod_[j] = work_eta_[j] * work_u_[j];
  fft.forward(work_prod_, neta);

  for (std::size_t m = 0; m < modes; ++m) {
    const std::complex<double> d = -kI * (k_[m] * mask_[m]);
    nu[m] *= d;
    neta[m] *= d;
  }
}

void Evolver::step_spectral(Spectrum& u, Spectrum& eta, double dt) {
  const std::size_t modes = u.size();
  const double h = 0.5 * dt;
  Spectrum k1u, k1e, k2u, k2e, k3u, k3e, k4u, k4e;
  Spectrum su(modes), se(modes), eu(modes), ee(modes), tu(modes), te(modes);

  nonlinear_term(u, eta, k1u, k1e);

  su = u;
  se = eta;
  axpy(su, h, k1u);
  axpy(se, h, k1e);
  apply_propagator(su, se, tu, te, h);
  nonlinear_term(tu, te, k2u, k2e);

  apply_propagator(u, eta, eu, ee, h);  // E_h u
  su = eu;
  se = ee;
  axpy(su, h, k2u);
  axpy(se, h, k2e);
  nonlinear_term(su, se, k3u, k3e);

  apply_propagator(k3u, k3e, tu, te, h);  // E_h k3
  Spectrum fu(modes), fe(modes);
  apply_propagator(u, eta, fu, fe, dt);  // E_dt u
  su = fu;
  se = fe;
  axpy(su, dt, tu);
  axpy(se, dt, te);
  nonlinear_term(su, se, k4u, k4e);

  // u_new = E_dt u + dt/6 (E_dt k1 + 2 E_h (k2 + k3) + k4)
  Spectrum ku(modes), ke(modes);
  apply_propagator(k1u, k1e, ku, ke, dt);
  for (std::size_t m = 0; m < modes; ++m) {
    su[m] = k2u[m] + k3u[m];
    se[m] = k2e[m] + k3e[m];
  }
  apply_propagator(su, se, tu, te, h);
  const double w = dt / 6.0;
  for (std::size_t m = 0; m < modes; ++m) {
    u[m] = fu[m] + w * (ku[m] + 2.0 * tu[m] + k4u[m]);
    eta[m] = fe[m] + w * (ke[m] + 2.0 * te[m] + k4e[m]);
  }
}

FieldPair Evolver::step(const FieldPair& state, double dt) {
  if (!(state.grid() == grid_)) throw std::invalid_argument("state is not on the evolver grid");
  Spectrum u = spectrum(state.f);
  Spectrum eta = spectrum(state.g);
  step_spectral(u, eta, dt);
  return {from_spectrum(grid_, u), from_spectrum(grid_, eta)};
}

FieldPair step(const FieldPair& state, double a, double c, double dt, bool dealias) {
  Evolver ev(state.grid(), a, c, dealias);
  return ev.step(state, dt);
}

EvolutionDiagnostics evolve(const FieldPair& initial, double a, double c,
                            const EvolveConfig& cfg, const Wave* reference) {
  return evolve(initial, a, c, cfg, reference, nullptr);
}

EvolutionDiagnostics evolve(const FieldPair& initial, double a, double c,
                            const EvolveConfig& cfg, const Wave* reference,
                            FieldPair* final_state) {
  cfg.validate();
  const Grid& grid = initial.grid();
  if (reference != nullptr && !(reference->phi.grid() == grid)) {
    throw std::invalid_argument("reference wave lives on a different grid");
  }
  Evolver ev(grid, a, c, cfg.dealias, cfg.nonlinear);

  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(cfg.t_final / cfg.dt - 1e-9)));
  const double dt = cfg.t_final / static_cast<double>(steps);

  Spectrum u = spectrum(initial.f);
  Spectrum eta = spectrum(initial.g);
  const double initial_max = std::max(initial.f.max_abs(), initial.g.max_abs());
  const double threshold = cfg.blowup_factor * initial_max;

  double ref_norm = 0.0;
  if (reference != nullptr) {
    ref_norm = std::sqrt(l2_norm_sq(reference->phi)) + std::sqrt(l2_norm_sq(reference->psi));
  }

  EvolutionDiagnostics diag;
  auto record = [&](double t, const FieldPair& state) {
    diag.times.push_back(t);
    diag.h_values.push_back(hamiltonian(state, a, c));
    diag.mass_u.push_back(integral(state.f));
    diag.mass_eta.push_back(integral(state.g));
    diag.momentum.push_back(invariant_momentum(state));
    if (reference != nullptr && ref_norm > 0.0) {
      const double s = reference->omega * t;
      const double eu = std::sqrt(l2_norm_sq(state.f - shift(reference->phi, s)));
      const double ee = std::sqrt(l2_norm_sq(state.g - shift(reference->psi, s)));
      diag.propagation_error.push_back((eu + ee) / ref_norm);
    } else if (reference != nullptr) {
      diag.propagation_error.push_back(0.0);
    } else {
      diag.propagation_error.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  };

  record(0.0, initial);
  for (std::size_t s = 1; s <= steps; ++s) {
    ev.step_spectral(u, eta, dt);
    const double t = dt * static_cast<double>(s);
    const bool due = s % cfg.record_every == 0 || s == steps;
    const bool suspicious =
        initial_max > 0.0 && std::max(spectral_max_bound(u, grid.size()),
                                      spectral_max_bound(eta, grid.size())) > threshold;
    if (!due && !suspicious) continue;
    FieldPair state{from_spectrum(grid, u), from_spectrum(grid, eta)};
    const double mag = std::max(state.f.max_abs(), state.g.max_abs());
    if (initial_max > 0.0 && (!(mag <= threshold))) throw BlowupDetected(t, mag);
    if (due) record(t, state);
    if (s == steps && final_state != nullptr) *final_state = std::move(state);
  }
  return diag;
}

double estimate_speed(const Field& before, const Field& after, double elapsed) {
  if (!(before.grid() == after.grid())) throw std::invalid_argument("fields on different grids");
  const Grid& g = before.grid();
  const auto b = spectrum(before);
  auto corr = spectrum(after);
  for (std::size_t m = 0; m < corr.size(); ++m) corr[m] *= std::conj(b[m]);
  const Field c = from_spectrum(g, corr);

  const std::size_t n = g.size();
  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (c[j] > c[best]) best = j;
  }
  const double left = c[(best + n - 1) % n];
  const double right = c[(best + 1) % n];
  const double denom = left - 2.0 * c[best] + right;
  const double frac = denom != 0.0 ? 0.5 * (left - right) / denom : 0.0;
  double lag = static_cast<double>(best) + frac;
  if (lag >= 0.5 * static_cast<double>(n)) lag -= static_cast<double>(n);
  return lag * g.spacing() / elapsed;
}

}  // namespace bwave
