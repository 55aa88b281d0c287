#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "bwave/evolver.hpp"
#include "bwave/functional.hpp"
#include "bwave/sampling.hpp"
#include "support.hpp"

using namespace bwave;
using cplx = std::complex<double>;
using Mat = std::array<cplx, 4>;  // row-major 2x2

namespace {

Mat mul(const Mat& x, const Mat& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

// Taylor series after scaling, then repeated squaring.
Mat expm(Mat m) {
  int squarings = 0;
  double norm = 0.0;
  for (const cplx& v : m) norm = std::max(norm, std::abs(v));
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  for (cplx& v : m) v = std::ldexp(1.0, -squarings) * v;
  Mat out{1.0, 0.0, 0.0, 1.0};
  Mat term = out;
  for (int k = 1; k < 30; ++k) {
    term = mul(term, m);
    for (cplx& v : term) v /= static_cast<double>(k);
    for (int i = 0; i < 4; ++i) out[i] += term[i];
  }
  for (int s = 0; s < squarings; ++s) out = mul(out, out);
  return out;
}

FieldPair smooth_state(const Grid& g, double amp = 0.3) {
  return {Field::from_function(g, [&](double x) { return amp * std::exp(-x * x / 4); }),
          Field::from_function(g, [&](double x) { return 0.6 * amp * std::exp(-(x - 1) * (x - 1) / 3); })};
}

double pair_distance(const FieldPair& p, const FieldPair& q) {
  return std::sqrt(l2_norm_sq(p.f - q.f) + l2_norm_sq(p.g - q.g));
}

FieldPair run(const FieldPair& s0, double a, double c, double dt, std::size_t steps) {
  Evolver ev(s0.grid(), a, c);
  FieldPair s = s0;
  for (std::size_t i = 0; i < steps; ++i) s = ev.step(s, dt);
  return s;
}

}  // namespace

TEST_CASE("zero state stays zero") {
  const Grid g(64, 20.0);
  const FieldPair z{Field(g), Field(g)};
  const FieldPair s = step(z, -1.0, -1.0, 1e-2);
  CHECK(s.f.max_abs() == 0.0);
  CHECK(s.g.max_abs() == 0.0);

  EvolveConfig cfg;
  cfg.t_final = 0.1;
  const EvolutionDiagnostics d = evolve(z, -1.0, -1.0, cfg);
  CHECK(d.max_relative_h_drift() == 0.0);
  CHECK(d.max_mass_drift_u() == 0.0);
}

TEST_CASE("linear flow of a single mode matches the 2x2 exponential") {
  const double a = -1.0, c = -0.5, L = 20.0, dt = 1e-2;
  const Grid g(64, L);
  const std::size_t m = 5;
  const double k = 2 * std::numbers::pi * m / L;
  const FieldPair s0{Field::from_function(g, [&](double x) { return std::cos(k * x); }),
                     Field::from_function(g, [&](double x) { return 0.5 * std::sin(k * x); })};

  Evolver ev(g, a, c, true, false);
  FieldPair s = s0;
  for (int i = 0; i < 100; ++i) s = ev.step(s, dt);

  // (U, H)' = -i [[0, p], [q, 0]] (U, H) for the e^{ikx} amplitudes.
  const double p = k * (1 + std::abs(c) * k * k), q = k * (1 + std::abs(a) * k * k);
  const cplx I(0.0, 1.0);
  const double t = 100 * dt;
  const Mat E = expm({0.0, -I * p * t, -I * q * t, 0.0});
  const cplx U0 = 1.0, H0 = -0.5 * I;  // cos kx, 0.5 sin kx
  const cplx U = E[0] * U0 + E[1] * H0, H = E[2] * U0 + E[3] * H0;
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const cplx phase = std::exp(I * k * g.x(j));
    err = std::max(err, std::abs(s.f[j] - (U * phase).real()));
    err = std::max(err, std::abs(s.g[j] - (H * phase).real()));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("linear flow conserves the per-mode quadratic invariant") {
  const double a = -0.4, c = -1.3;
  const Grid g(128, 30.0);
  Rng rng(4);
  const FieldPair s0 = random_pair(g, rng);
  Evolver ev(g, a, c, true, false);
  FieldPair s = s0;
  for (int i = 0; i < 100; ++i) s = ev.step(s, 0.01);
  const auto U0 = spectrum(s0.f), H0 = spectrum(s0.g), U1 = spectrum(s.f), H1 = spectrum(s.g);
  double scale = 0.0, worst = 0.0;
  for (std::size_t m = 1; m < g.modes() - 1; ++m) {
    const double k = g.wavenumber(m);
    const double p = k * (1 + std::abs(c) * k * k), q = k * (1 + std::abs(a) * k * k);
    const double e0 = q * std::norm(U0[m]) + p * std::norm(H0[m]);
    const double e1 = q * std::norm(U1[m]) + p * std::norm(H1[m]);
    scale = std::max(scale, e0);
    worst = std::max(worst, std::abs(e1 - e0));
  }
  CHECK(worst <= 1e-12 * scale);
}

TEST_CASE("mass is conserved exactly") {
  const Grid g(256, 40.0);
  const FieldPair s0 = smooth_state(g, 0.8);
  EvolveConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_final = 5.0;
  const EvolutionDiagnostics d = evolve(s0, -1.0, -1.0, cfg);
  CHECK(d.size() >= 2);
  CHECK(d.max_mass_drift_u() <= 1e-12 * (1 + std::abs(d.mass_u.front())));
  CHECK(d.max_mass_drift_eta() <= 1e-12 * (1 + std::abs(d.mass_eta.front())));
  CHECK(std::isnan(d.propagation_error.back()));
}

TEST_CASE("forward then backward step returns the state") {
  const Grid g(256, 40.0);
  const FieldPair s0 = smooth_state(g, 0.8);
  Evolver ev(g, -1.0, -1.0);
  const FieldPair back = ev.step(ev.step(s0, 1e-3), -1e-3);
  CHECK(pair_distance(back, s0) <= 1e-8 * std::sqrt(mass(s0)));
}

TEST_CASE("fourth-order convergence at a fixed horizon") {
  const Grid g(128, 40.0);
  const FieldPair s0 = smooth_state(g, 0.8);
  const double T = 2.0;
  const FieldPair ref = run(s0, -1.0, -0.5, T / 1280, 1280);
  double prev = 0.0;
  for (std::size_t steps : {20u, 40u, 80u}) {
    const double err = pair_distance(run(s0, -1.0, -0.5, T / steps, steps), ref);
    if (prev > 0.0) {
      INFO("steps " << steps);
      CHECK(std::log2(prev / err) >= 3.8);
    }
    prev = err;
  }
}

TEST_CASE("Hamiltonian and momentum drift shrink at fourth order") {
  const Grid g(128, 40.0);
  const FieldPair s0 = smooth_state(g, 0.8);
  const double a = -1.0, c = -0.5, T = 2.0;
  const double h0 = hamiltonian(s0, a, c), i0 = invariant_momentum(s0);
  std::vector<double> dh, di;
  for (std::size_t steps : {25u, 50u, 100u, 200u}) {
    const FieldPair s = run(s0, a, c, T / steps, steps);
    dh.push_back(std::abs(hamiltonian(s, a, c) - h0));
    di.push_back(std::abs(invariant_momentum(s) - i0));
  }
  // Least-squares slope over the three halvings.
  auto rate = [](const std::vector<double>& e) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double x = static_cast<double>(i), y = -std::log2(e[i]);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  INFO("H drift " << dh[0] << " " << dh[1] << " " << dh[2] << " " << dh[3]);
  CHECK(rate(dh) >= 3.8);
  INFO("momentum drift " << di[0] << " " << di[1] << " " << di[2] << " " << di[3]);
  CHECK(rate(di) >= 3.8);
}

TEST_CASE("blowup is reported with its time") {
  const Grid g(256, 40.0);
  const FieldPair s0 = smooth_state(g, 1.0);
  EvolveConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_final = 1.0;
  cfg.blowup_factor = 1e-3;  // any state trips it
  try {
    evolve(s0, -1.0, -1.0, cfg);
    FAIL("expected BlowupDetected");
  } catch (const BlowupDetected& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.time() <= cfg.dt * 1.000001);
  }
}

TEST_CASE("bad evolve settings throw") {
  EvolveConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg.dt = 0.1;
  cfg.t_final = 0.05;
  CHECK_THROWS(cfg.validate());
  CHECK_THROWS(Evolver(Grid(64, 1.0), 1.0, -1.0));
}

TEST_CASE("speed estimate from a rigid shift") {
  const Grid g(512, 40.0);
  const Field u = Field::from_function(g, [](double x) { return std::exp(-x * x / 2); });
  const Field moved = shift(u, 1.3);
  CHECK(estimate_speed(u, moved, 2.0) == doctest::Approx(0.65).epsilon(2e-2));
  CHECK(estimate_speed(u, shift(u, -0.7), 1.0) == doctest::Approx(-0.7).epsilon(2e-2));
}

TEST_CASE("reference wave and its mirror travel rigidly") {
  const auto& ref = test::reference_solve();
  const Wave built = build_wave(*ref.result, wave_grid(*ref.result, ref.a, ref.c, 2048));
  const Wave w = widen(built, spectral_widen_factor(built));
  EvolveConfig cfg;
  cfg.t_final = 4.0;
  for (const Wave& wave : {w, mirror(w)}) {
    FieldPair last{wave.phi, wave.psi};
    const EvolutionDiagnostics d = evolve({wave.phi, wave.psi}, ref.a, ref.c, cfg, &wave, &last);
    CHECK(d.max_propagation_error() <= 1e-6);
    CHECK(d.max_relative_h_drift() <= 1e-8);
    const double v = estimate_speed(wave.phi, last.f, cfg.t_final);
    CHECK(v == doctest::Approx(wave.omega).epsilon(0.05));
  }
}
