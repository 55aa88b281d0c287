// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "bwave/evolver.hpp"
#include "bwave/functional.hpp"
#include "bwave/io.hpp"
#include "bwave/minimizer.hpp"
#include "bwave/pipeline.hpp"
#include "bwave/wave.hpp"

using namespace bwave;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("criterion %2d %-28s %s  %s\n", id, title.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void parallel(std::size_t count, const std::function<void(std::size_t)>& fn) {
  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8u));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

RunConfig base_config(double a, double c) {
  RunConfig cfg;
  cfg.coefficients = Coefficients{a, 0.0, c, 0.0};
  return cfg;
}

double mu0_of(double a, double c) { return bounds_report(a, c, 1.0, seed_profile()).mu0; }

bool passes(const WaveReport& r, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    bool found = false;
    for (const auto& [name, st] : r.flags) {
      if (name == n) {
        found = true;
        if (st != CheckStatus::Pass) return false;
      }
    }
    if (!found) return false;
  }
  return true;
}

FieldPair evolve_to(const Wave& w, double a, double c, double t_final, std::size_t steps) {
  Evolver ev(w.phi.grid(), a, c);
  Evolver::Spectrum u = spectrum(w.phi), eta = spectrum(w.psi);
  const double dt = t_final / static_cast<double>(steps);
  for (std::size_t i = 0; i < steps; ++i) ev.step_spectral(u, eta, dt);
  return {from_spectrum(w.phi.grid(), u), from_spectrum(w.psi.grid(), eta)};
}

double distance(const FieldPair& p, const FieldPair& q) {
  return std::sqrt(l2_norm_sq(p.f - q.f) + l2_norm_sq(p.g - q.g));
}

}  // namespace

int main() {
  const double a = -1.0, c = -1.0;
  const RunConfig cfg = base_config(a, c);
  const double m0 = mu0_of(a, c);
  std::printf("a = c = -1: mu0 = %.10g (Gaussian seed)\n", m0);

  // 1. Gradient against finite differences.
  {
    const auto t0 = Clock::now();
    const VerifyResult v = gradient_suite(a, c, 100, 7, 512, 40.0);
    const double secs = since(t0);
    const double err = v.details.value("max_relative_error", std::numeric_limits<double>::quiet_NaN());
    report(1, "gradient", v.passed() && err < 1e-6 && secs < 10.0,
           fmt("max rel error %.2e over 100 pairs, %.2f s", err, secs));
  }

  // 2-3. Sandwich and Lagrange identity at 1, 2, 5, 10 mu0; also 4 mu0 for 4-5.
  const std::vector<double> factors{1.0, 2.0, 5.0, 10.0, 4.0, 6.0, 8.0};
  std::vector<PointResult> points(factors.size());
  {
    const auto t0 = Clock::now();
    parallel(factors.size(), [&](std::size_t i) { points[i] = run_point(cfg, a, c, factors[i] * m0); });
    const double secs = since(t0);

    bool sandwich = true, lagrange = true;
    double worst_res = 0.0, worst_defect = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      const PointResult& p = points[i];
      if (!p.minimizer) {
        sandwich = lagrange = false;
        continue;
      }
      const MinimizerResult& r = *p.minimizer;
      worst_res = std::max(worst_res, r.residual);
      sandwich = sandwich && r.converged() && r.residual <= 1e-8 && p.bounds.lower <= r.m_value &&
                 r.m_value <= p.bounds.upper;
      const double d = lagrange_defect(r, a, c);
      worst_defect = std::max(worst_defect, d);
      lagrange = lagrange && r.converged() && d <= 1e-6 && r.lambda < 0.0;
      std::printf("  mu = %5.1f mu0: lower %.6g <= m %.10g <= upper %.6g, residual %.2e, lambda %.8g\n",
                  factors[i], p.bounds.lower, r.m_value, p.bounds.upper, r.residual, r.lambda);
    }
    report(2, "bound sandwich", sandwich && secs < 300.0,
           fmt("4 masses, max residual %.2e, %.1f s", worst_res, secs));
    report(3, "Lagrange identity", lagrange, fmt("max defect %.2e, lambda < 0 at every mass", worst_defect));
  }

  // 4. Sub-homogeneity at mu = 4 mu0.
  {
    const PointResult& base = points[4];
    bool ok = base.minimizer && base.minimizer->converged();
    std::string detail;
    for (std::size_t k : {5u, 6u}) {
      const double theta = factors[k] / factors[4];
      const PointResult& big = points[k];
      if (!ok || !big.minimizer || !big.minimizer->converged()) {
        ok = false;
        continue;
      }
      const double m1 = base.minimizer->m_value, m2 = big.minimizer->m_value;
      ok = ok && m2 <= theta * m1 + 1e-6 * std::abs(m1);
      if (!detail.empty()) detail += ", ";
      detail += fmt("m(%.1f mu) = %.8g vs %.1f m(mu) = %.8g", theta, m2, theta, theta * m1);
    }
    report(4, "sub-homogeneity", ok, detail);
  }

  // 5. Stationary system for the 4 mu0 wave.
  const PointResult& main = points[4];
  {
    const bool ok = main.report && main.report->stationary_residual <= 1e-6 * main.report->peak;
    report(5, "stationary system", ok,
           main.report ? fmt("residual %.2e, peak %.4g", main.report->stationary_residual, main.report->peak)
                       : main.error);
  }

  // 6. Norm identity, L2 ratio and speed bound over the 32-point sweep.
  std::vector<PointResult> sweep;
  {
    std::vector<std::array<double, 3>> tasks;
    for (double sa : {-0.1, -1.0}) {
      for (double sc : {-0.1, -1.0}) {
        const double base_mu = mu0_of(sa, sc);
        for (int i = 0; i < 8; ++i) tasks.push_back({sa, sc, base_mu * std::pow(100.0, i / 7.0)});
      }
    }
    sweep.resize(tasks.size());
    const auto t0 = Clock::now();
    parallel(tasks.size(), [&](std::size_t i) {
      sweep[i] = run_point(base_config(tasks[i][0], tasks[i][1]), tasks[i][0], tasks[i][1], tasks[i][2]);
    });
    const double secs = since(t0);

    bool ok = true;
    double sup = 0.0, worst_identity = 0.0, worst_speed = 0.0;
    std::size_t unconverged = 0;
    for (const PointResult& p : sweep) {
      if (!p.report) {
        ok = false;
        std::printf("  a=%g c=%g mu=%g: %s\n", p.a, p.c, p.mu, p.error.c_str());
        continue;
      }
      const WaveReport& r = *p.report;
      if (!p.minimizer->converged()) ++unconverged;
      const double id = std::abs(r.l2_size - r.l2_identity) / r.l2_identity;
      worst_identity = std::max(worst_identity, id);
      worst_speed = std::max(worst_speed, std::abs(r.speed) / r.speed_bound);
      sup = std::max(sup, r.l2_bound_ratio);
      ok = ok && id <= 1e-8 && std::isfinite(r.l2_bound_ratio) && r.speed < 0.0 &&
           std::abs(r.speed) <= r.speed_bound;
    }
    report(6, "norms and speed (sweep)", ok && secs < 1800.0,
           fmt("32 points, l2_ratio sup %.4g, max identity defect %.1e, max |omega|/bound %.3f, "
               "%zu minimizer(s) stalled at the roundoff floor, %.1f s",
               sup, worst_identity, worst_speed, unconverged, secs));
  }

  // 7. Shape and decay, on the main wave and every sweep wave.
  {
    const auto names = {"sign", "shape", "decay_phi", "decay_psi", "boundary_leak"};
    bool ok = main.report && passes(*main.report, names);
    std::size_t good = 0;
    double min_alpha = std::numeric_limits<double>::infinity(), max_leak = 0.0, max_fit = 0.0;
    for (const PointResult& p : sweep) {
      if (!p.report) continue;
      const WaveReport& r = *p.report;
      if (passes(r, names)) ++good;
      min_alpha = std::min({min_alpha, r.decay_alpha_phi, r.decay_alpha_psi});
      max_leak = std::max(max_leak, r.boundary_leak);
      max_fit = std::max({max_fit, r.decay_fit_residual_phi, r.decay_fit_residual_psi});
    }
    ok = ok && good == sweep.size();
    const WaveReport* r = main.report ? &*main.report : nullptr;
    report(7, "shape and decay", ok,
           r ? fmt("4 mu0: alpha %.4f/%.4f, leak %.1e; sweep %zu/%zu pass, min alpha %.3g, "
                   "max fit residual %.1e, max leak %.1e",
                   r->decay_alpha_phi, r->decay_alpha_psi, r->boundary_leak, good, sweep.size(), min_alpha,
                   max_fit, max_leak)
             : main.error);
  }

  // 8. Rigid propagation of the 4 mu0 wave to t = 1/|omega|.
  std::optional<Wave> moving;
  if (main.wave) moving = widen(*main.wave, spectral_widen_factor(*main.wave));
  {
    if (!moving) {
      report(8, "rigid propagation", false, "no wave");
    } else {
      EvolveConfig ec;
      ec.dt = 1e-3;
      ec.t_final = 1.0 / std::abs(moving->omega);
      const auto t0 = Clock::now();
      try {
        const EvolutionDiagnostics d = evolve({moving->phi, moving->psi}, a, c, ec, &*moving);
        const double secs = since(t0);
        const double mu_tol = 1e-12 * (1 + std::abs(d.mass_u.front()));
        const double me_tol = 1e-12 * (1 + std::abs(d.mass_eta.front()));
        const bool ok = d.max_propagation_error() <= 1e-3 && d.max_relative_h_drift() <= 1e-8 &&
                        d.max_mass_drift_u() <= mu_tol && d.max_mass_drift_eta() <= me_tol && secs < 300.0;
        report(8, "rigid propagation", ok,
               fmt("t = %.4g, n = %zu, L = %.4g: prop err %.2e, H drift %.2e, mass drift %.1e/%.1e, %.1f s",
                   ec.t_final, moving->phi.size(), moving->phi.grid().length(), d.max_propagation_error(),
                   d.max_relative_h_drift(), d.max_mass_drift_u(), d.max_mass_drift_eta(), secs));
      } catch (const BlowupDetected& e) {
        report(8, "rigid propagation", false, e.what());
      }
    }
  }

  // 9. Order of the one-period error under dt halving, against a dt/8 reference.
  {
    if (!moving) {
      report(9, "integrator order", false, "no wave");
    } else {
      const double T = 1.0 / std::abs(moving->omega);
      const std::size_t coarse = static_cast<std::size_t>(std::ceil(T / 0.04));
      const FieldPair ref = evolve_to(*moving, a, c, T, 16 * coarse);
      std::vector<double> errs;
      for (std::size_t s : {coarse, 2 * coarse, 4 * coarse}) errs.push_back(distance(evolve_to(*moving, a, c, T, s), ref));
      const double r1 = std::log2(errs[0] / errs[1]), r2 = std::log2(errs[1] / errs[2]);
      report(9, "integrator order", r1 >= 3.8 && r2 >= 3.8,
             fmt("dt %.4f..%.4f: errors %.2e %.2e %.2e, rates %.2f %.2f", T / coarse, T / (4 * coarse), errs[0],
                 errs[1], errs[2], r1, r2));
    }
  }

  // 10. Rearrangement suite.
  {
    const VerifyResult v = rearrangement_suite(a, c, 100, 11, 512, 40.0);
    report(10, "rearrangement", v.passed(), v.details.dump());
  }

  // 11. Two verify runs, different thread counts, identical reports.
  {
    const fs::path root = fs::temp_directory_path() / "bwave_acceptance_determinism";
    fs::remove_all(root);
    RunConfig vc = cfg;
    vc.mu_factor = 4.0;
    CommandOptions o1, o2;
    o1.out_dir = root / "one";
    o1.jobs = 1;
    o2.out_dir = root / "two";
    o2.jobs = 4;
    const int rc1 = cmd_verify(vc, o1), rc2 = cmd_verify(vc, o2);
    const std::string r1 = read_text_file(o1.out_dir / "report.json");
    const std::string r2 = read_text_file(o2.out_dir / "report.json");
    report(11, "determinism", rc1 == 0 && rc2 == 0 && r1 == r2,
           fmt("exit %d/%d, %zu-byte reports %s", rc1, rc2, r1.size(), r1 == r2 ? "identical" : "differ"));
    fs::remove_all(root);
  }

  std::printf("%s\n", failures == 0 ? "all criteria pass" : (std::to_string(failures) + " criteria fail").c_str());
  return failures == 0 ? 0 : 1;
}
