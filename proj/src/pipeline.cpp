#include "bwave/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "bwave/io.hpp"
#include "bwave/params.hpp"
#include "bwave/rearrange.hpp"
#include "bwave/sampling.hpp"

namespace bwave {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Results go into
// caller-owned slots, so output order never depends on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void write_json(const fs::path& path, const Json& j) { write_text_file(path, dump(j)); }

template <typename Writer>
void write_stream(const fs::path& path, Writer&& w) {
  std::ostringstream os;
  w(os);
  write_text_file(path, os.str());
}

bool any_failed(const CheckList& checks) {
  for (const auto& [name, st] : checks) {
    if (st == CheckStatus::Fail) return true;
  }
  return false;
}

Json regime_json(const Coefficients& co, const RegimeReport& rr) {
  Json j;
  j["a"] = co.a;
  j["b"] = co.b;
  j["c"] = co.c;
  j["d"] = co.d;
  j["accepted"] = rr.accepted;
  j["violations"] = rr.violations;
  return j;
}

// Shared preamble: coefficients plus regime gate. Returns false (and writes
// the rejection report) when the regime is rejected.
bool admit(const RunConfig& cfg, const CommandOptions& opts, Json& report, Coefficients& co) {
  co = cfg.resolved_coefficients();
  const RegimeReport rr = validate_solver_regime(co);
  report["config"] = config_echo(cfg);
  report["regime"] = regime_json(co, rr);
  if (!rr.accepted) {
    std::cerr << "regime " << rr.summary() << '\n';
    write_json(opts.out_dir / "report.json", report);
    return false;
  }
  return true;
}

Json sandwich_checks(const BoundsReport& b, const MinimizerResult& r, double a, double c) {
  CheckList checks;
  checks.emplace_back("converged", check(r.converged()));
  checks.emplace_back("residual", check(r.residual <= 1e-8));
  checks.emplace_back("lower_bound", check(b.lower <= r.m_value));
  checks.emplace_back("upper_bound", check(r.m_value <= b.upper));
  checks.emplace_back("lambda_negative", check(r.lambda < 0.0));
  checks.emplace_back("lagrange_identity", check(lagrange_defect(r, a, c) <= 1e-6));
  return to_json(checks);
}

MinimizerResult result_from_pair(const PairFile& pf) {
  MinimizerResult r{.pair = pf.pair, .history = {}};
  r.mu = pf.mu;
  r.lambda = pf.lambda;
  r.status = MinimizerStatus::Converged;
  return r;
}

}  // namespace

// ---- pipeline ---------------------------------------------------------------

double resolve_mu(const RunConfig& cfg, double a, double c) {
  if (cfg.mu) return *cfg.mu;
  const UpperBound ub = upper_bound_m(a, c, 1.0, seed_profile(cfg.seed_profile));
  return cfg.mu_factor * mu0(a, c, ub.c1);
}

Grid minimizer_grid(const RunConfig& cfg, double a, double c, double mu) {
  if (cfg.grid_length) return Grid(cfg.grid_n, *cfg.grid_length);
  return auto_minimizer_grid(a, c, mu, cfg.grid_n, cfg.grid_decay_lengths,
                             seed_profile(cfg.seed_profile));
}

PointResult run_point(const RunConfig& cfg, double a, double c, double mu, bool build) {
  PointResult out;
  out.a = a;
  out.c = c;
  out.mu = mu;
  try {
    const RegimeReport rr = validate_solver_regime({a, 0.0, c, 0.0});
    if (!rr.accepted) throw std::invalid_argument("regime " + rr.summary());
    const Field seed = seed_profile(cfg.seed_profile);
    out.bounds = bounds_report(a, c, mu, seed);
    out.grid = minimizer_grid(cfg, a, c, mu);
    out.minimizer = minimize(a, c, mu, out.grid, cfg.solver, seed);
    const MinimizerResult& r = *out.minimizer;
    if (build && r.lambda < 0.0) {
      const Grid wg = wave_grid(r, a, c, cfg.wave_points(), cfg.wave_decay_lengths);
      out.wave = build_wave(r, wg);
      out.report = verify(*out.wave, a, c, out.bounds.c1);
    } else if (build) {
      out.error = "lambda >= 0 (" + to_string(r.status) + ")";
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

double lagrange_defect(const MinimizerResult& r, double a, double c) {
  const VariationalValue v = tau(r.pair, a, c);
  const double lm = r.lambda * r.mu;
  return std::abs(lm - (v.tau + 0.5 * v.cross)) / std::max(1.0, std::abs(lm));
}

// ---- JSON -------------------------------------------------------------------

Json to_json(const BoundsReport& b) {
  Json j;
  j["m_lower"] = b.lower;
  j["m_upper"] = b.upper;
  j["c1"] = b.c1;
  j["mu0"] = b.mu0;
  return j;
}

Json to_json(const MinimizerResult& r) {
  Json j;
  j["status"] = to_string(r.status);
  j["mu"] = r.mu;
  j["m"] = r.m_value;
  j["lambda"] = r.lambda;
  j["lambda_gap"] = r.lambda_gap;
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["rearrangements_accepted"] = r.rearrangements_accepted;
  j["initial_lambda_scale"] = r.initial_lambda_scale;
  j["n"] = r.pair.grid().size();
  j["L"] = r.pair.grid().length();
  return j;
}

Json to_json(const CheckList& checks) {
  Json j = Json::object();
  for (const auto& [name, st] : checks) j[name] = to_string(st);
  return j;
}

Json to_json(const WaveReport& w, const Wave& wave) {
  Json j;
  j["residual"] = w.stationary_residual;
  j["peak"] = w.peak;
  j["l2_size"] = w.l2_size;
  j["l2_identity"] = w.l2_identity;
  j["l2_ratio"] = w.l2_bound_ratio;
  j["omega"] = wave.omega;
  j["omega_bound"] = w.speed_bound;
  j["alpha_phi"] = w.decay_alpha_phi;
  j["alpha_psi"] = w.decay_alpha_psi;
  j["fit_residual_phi"] = w.decay_fit_residual_phi;
  j["fit_residual_psi"] = w.decay_fit_residual_psi;
  j["boundary_leak"] = w.boundary_leak;
  j["shape_defect"] = w.shape_defect;
  j["insufficient_tail"] = w.insufficient_tail;
  j["n"] = wave.phi.grid().size();
  j["L"] = wave.phi.grid().length();
  j["flags"] = to_json(w.flags);
  return j;
}

Json to_json(const EvolutionDiagnostics& d) {
  Json j;
  j["samples"] = d.size();
  j["t_final"] = d.times.empty() ? 0.0 : d.times.back();
  j["max_propagation_error"] = d.max_propagation_error();
  j["h_drift"] = d.max_relative_h_drift();
  j["mass_u_drift"] = d.max_mass_drift_u();
  j["mass_eta_drift"] = d.max_mass_drift_eta();
  double mom = 0.0;
  for (double m : d.momentum) mom = std::max(mom, std::abs(m - d.momentum.front()));
  j["momentum_drift"] = mom;
  return j;
}

Json config_echo(const RunConfig& cfg) {
  Json j = Json::object();
  for (const auto& [k, v] : cfg.entries) j[k] = v;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

bool VerifyResult::passed() const { return !any_failed(checks); }

// ---- verification suites ----------------------------------------------------

VerifyResult gradient_suite(double a, double c, std::size_t pairs, std::uint64_t seed,
                            std::size_t n, double length) {
  const Grid grid(n, length);
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const FieldPair p = random_pair(grid, rng);
    const FieldPair q = random_pair(grid, rng);
    const FieldPair gr = grad(p, a, c);
    const double analytic = inner(gr.f, q.f) + inner(gr.g, q.g);
    // tau is cubic along a line, so Richardson on two central differences
    // removes the truncation error entirely.
    const double h = 1e-2;
    auto central = [&](double step) {
      return (tau(p + step * q, a, c).tau - tau(p - step * q, a, c).tau) / (2.0 * step);
    };
    const double fd = (4.0 * central(h) - central(2.0 * h)) / 3.0;
    const double scale = std::max({std::abs(analytic), std::abs(fd), 1e-12});
    worst = std::max(worst, std::abs(fd - analytic) / scale);
  }
  VerifyResult out;
  out.checks.emplace_back("gradient_fd", check(worst < 1e-6));
  out.details["pairs"] = pairs;
  out.details["max_relative_error"] = worst;
  return out;
}

VerifyResult rearrangement_suite(double a, double c, std::size_t pairs, std::uint64_t seed,
                                 std::size_t n, double length) {
  const Grid grid(n, length);
  Rng rng(seed);
  double worst_norm = 0.0;
  double worst_hl = 0.0;  // max of (int u v - int u* v*), <= 0 expected
  std::size_t tau_ok = 0;
  double worst_tau = -std::numeric_limits<double>::infinity();
  const double inf = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < pairs; ++i) {
    const FieldPair p = random_pair(grid, rng);
    for (const Field* u : {&p.f, &p.g}) {
      const Field s = symmetric_decreasing(*u);
      for (double pw : {2.0, 3.0, 4.0, inf}) {
        const double lhs = lp_norm(*u, pw);
        const double rhs = lp_norm(s, pw);
        worst_norm = std::max(worst_norm, std::abs(lhs - rhs) / std::max(lhs, 1e-300));
      }
    }

    const FieldPair nn = random_pair(grid, rng, 1.0, true);
    const double before = inner(nn.f, nn.g);
    const double after = inner(symmetric_decreasing(nn.f), symmetric_decreasing(nn.g));
    worst_hl = std::max(worst_hl, (before - after) / std::max(std::abs(after), 1e-300));

    const double t0 = tau(p, a, c).tau;
    const double t1 = tau(project_pair(p), a, c).tau;
    const double excess = t1 - t0;
    worst_tau = std::max(worst_tau, excess / std::max(std::abs(t0), 1e-300));
    if (excess <= 1e-8 * std::abs(t0)) ++tau_ok;
  }

  VerifyResult out;
  out.checks.emplace_back("rearrange_lp_norms", check(worst_norm <= 1e-12));
  out.checks.emplace_back("rearrange_hardy_littlewood", check(worst_hl <= 1e-12));
  out.checks.emplace_back("rearrange_tau_nonincrease", check(tau_ok * 100 >= 99 * pairs));
  out.details["pairs"] = pairs;
  out.details["max_norm_defect"] = worst_norm;
  out.details["max_hardy_littlewood_excess"] = worst_hl;
  out.details["tau_nonincrease_count"] = tau_ok;
  out.details["max_tau_excess"] = worst_tau;
  return out;
}

VerifyResult run_verify_suite(const RunConfig& cfg, std::size_t jobs) {
  VerifyResult out;
  const Coefficients co = cfg.resolved_coefficients();
  const double a = co.a;
  const double c = co.c;
  const Field seed = seed_profile(cfg.seed_profile);
  const BoundsReport unit = bounds_report(a, c, 1.0, seed);
  const double m0 = unit.mu0;
  out.details["mu0"] = m0;
  out.details["c1"] = unit.c1;

  auto merge = [&](const VerifyResult& part, const char* key) {
    for (const auto& ch : part.checks) out.checks.push_back(ch);
    out.details[key] = part.details;
  };
  merge(gradient_suite(a, c, cfg.verify_random_pairs, cfg.verify_seed, cfg.verify_random_n,
                       cfg.verify_random_length),
        "gradient");
  merge(rearrangement_suite(a, c, cfg.verify_random_pairs, cfg.verify_seed + 1,
                            cfg.verify_random_n, cfg.verify_random_length),
        "rearrangement");

  // Every mu needed by the sandwich and sub-homogeneity checks, solved once.
  std::vector<double> mus;
  auto want = [&](double mu) {
    for (double m : mus) {
      if (m == mu) return;
    }
    mus.push_back(mu);
  };
  for (double f : cfg.verify_sandwich_factors) want(f * m0);
  const double sub_mu = cfg.verify_sub_mu_factor * m0;
  want(sub_mu);
  for (double th : cfg.verify_theta) want(th * sub_mu);
  const double main_mu = resolve_mu(cfg, a, c);
  want(main_mu);

  std::vector<PointResult> solved(mus.size());
  parallel_for(mus.size(), jobs, [&](std::size_t i) {
    solved[i] = run_point(cfg, a, c, mus[i], mus[i] == main_mu);
  });
  auto find = [&](double mu) -> const PointResult& {
    for (std::size_t i = 0; i < mus.size(); ++i) {
      if (mus[i] == mu) return solved[i];
    }
    throw std::logic_error("mu not solved");
  };

  Json sandwich = Json::array();
  for (double f : cfg.verify_sandwich_factors) {
    const PointResult& pr = find(f * m0);
    const std::string name = "sandwich_" + label(f) + "mu0";
    Json d;
    d["factor"] = f;
    d["mu"] = pr.mu;
    d["bounds"] = to_json(pr.bounds);
    if (f < 1.0) {
      // Below the threshold the minimizer need not exist.
      out.checks.emplace_back(name, CheckStatus::Skipped);
    } else if (!pr.minimizer) {
      out.checks.emplace_back(name, CheckStatus::Fail);
      d["error"] = pr.error;
    } else {
      const MinimizerResult& r = *pr.minimizer;
      d["minimizer"] = to_json(r);
      d["lagrange_defect"] = lagrange_defect(r, a, c);
      out.checks.emplace_back(name, check(r.converged() && r.residual <= 1e-8 &&
                                          pr.bounds.lower <= r.m_value &&
                                          r.m_value <= pr.bounds.upper));
      out.checks.emplace_back("lagrange_" + label(f) + "mu0",
                              check(r.converged() && r.lambda < 0.0 &&
                                    lagrange_defect(r, a, c) <= 1e-6));
    }
    sandwich.push_back(d);
  }
  out.details["sandwich"] = sandwich;

  Json sub = Json::array();
  const PointResult& base = find(sub_mu);
  for (double th : cfg.verify_theta) {
    const PointResult& big = find(th * sub_mu);
    const std::string name = "sub_homogeneity_theta" + label(th);
    Json d;
    d["theta"] = th;
    d["mu"] = sub_mu;
    if (cfg.verify_sub_mu_factor < 1.0) {
      out.checks.emplace_back(name, CheckStatus::Skipped);
    } else if (!base.minimizer || !big.minimizer || !base.minimizer->converged() ||
               !big.minimizer->converged()) {
      out.checks.emplace_back(name, CheckStatus::Fail);
    } else {
      const double m1 = base.minimizer->m_value;
      const double m2 = big.minimizer->m_value;
      d["m_mu"] = m1;
      d["m_theta_mu"] = m2;
      d["theta_m_mu"] = th * m1;
      out.checks.emplace_back(name, check(m2 <= th * m1 + 1e-6 * std::abs(m1)));
    }
    sub.push_back(d);
  }
  out.details["sub_homogeneity"] = sub;

  const PointResult& mainp = find(main_mu);
  if (mainp.report) {
    for (const auto& [flag, st] : mainp.report->flags) out.checks.emplace_back("wave_" + flag, st);
    out.details["wave"] = to_json(*mainp.report, *mainp.wave);
  } else {
    out.checks.emplace_back("wave", CheckStatus::Fail);
    out.details["wave_error"] = mainp.error;
  }

  // L2 ratio and speed bound over the configured sweep, or over the waves
  // built above when no sweep is configured.
  std::vector<PointResult> sweep;
  if (cfg.sweep_mu || cfg.sweep_a || cfg.sweep_c) {
    const std::vector<double> as = cfg.sweep_a ? cfg.sweep_a->values : std::vector<double>{a};
    const std::vector<double> cs = cfg.sweep_c ? cfg.sweep_c->values : std::vector<double>{c};
    const std::vector<double> ms =
        cfg.sweep_mu ? cfg.sweep_mu->values : std::vector<double>{cfg.mu_factor};
    struct Task {
      double a, c, mu;
    };
    std::vector<Task> tasks;
    for (double sa : as) {
      for (double sc : cs) {
        const double m0p = bounds_report(sa, sc, 1.0, seed).mu0;
        for (double m : ms) {
          tasks.push_back({sa, sc, cfg.sweep_mu_in_mu0 || !cfg.sweep_mu ? m * m0p : m});
        }
      }
    }
    sweep.resize(tasks.size());
    parallel_for(tasks.size(), jobs, [&](std::size_t i) {
      sweep[i] = run_point(cfg, tasks[i].a, tasks[i].c, tasks[i].mu);
    });
  } else if (mainp.report) {
    sweep.push_back(mainp);
  }

  double sup_ratio = 0.0;
  double max_residual = 0.0;
  std::size_t unconverged = 0;
  bool speed_ok = !sweep.empty();
  bool all_built = !sweep.empty();
  bool identity_ok = !sweep.empty();
  Json pts = Json::array();
  for (const auto& pr : sweep) {
    Json d;
    d["a"] = pr.a;
    d["c"] = pr.c;
    d["mu"] = pr.mu;
    if (!pr.report) {
      all_built = false;
      speed_ok = false;
      identity_ok = false;
      d["error"] = pr.error;
    } else {
      const WaveReport& w = *pr.report;
      sup_ratio = std::max(sup_ratio, w.l2_bound_ratio);
      speed_ok = speed_ok && std::abs(pr.wave->omega) <= w.speed_bound;
      identity_ok = identity_ok && std::abs(w.l2_size - w.l2_identity) <= 1e-8 * w.l2_identity;
      d["residual"] = pr.minimizer->residual;
      d["status"] = to_string(pr.minimizer->status);
      max_residual = std::max(max_residual, pr.minimizer->residual);
      if (!pr.minimizer->converged()) ++unconverged;
      speed_ok = speed_ok && pr.wave->omega < 0.0;
      d["omega"] = pr.wave->omega;
      d["omega_bound"] = w.speed_bound;
      d["l2_size"] = w.l2_size;
      d["l2_identity"] = w.l2_identity;
      d["l2_ratio"] = w.l2_bound_ratio;
    }
    pts.push_back(d);
  }
  out.checks.emplace_back("sweep_waves_built", check(all_built));
  out.checks.emplace_back("sweep_l2_identity", check(identity_ok));
  out.checks.emplace_back("sweep_l2_ratio_finite", check(all_built && std::isfinite(sup_ratio)));
  out.checks.emplace_back("sweep_speed_bound", check(speed_ok));
  out.details["sweep"] = pts;
  out.details["l2_ratio_sup"] = sup_ratio;
  out.details["sweep_max_residual"] = max_residual;
  out.details["sweep_unconverged"] = unconverged;
  return out;
}

// ---- commands ---------------------------------------------------------------

int cmd_minimize(const RunConfig& cfg, const CommandOptions& opts) {
  const auto t0 = Clock::now();
  Json report;
  Coefficients co;
  if (!admit(cfg, opts, report, co)) return kExitRegime;

  const double mu = resolve_mu(cfg, co.a, co.c);
  const Field seed = seed_profile(cfg.seed_profile);
  const BoundsReport b = bounds_report(co.a, co.c, mu, seed);
  const Grid grid = minimizer_grid(cfg, co.a, co.c, mu);
  const MinimizerResult r = minimize(co.a, co.c, mu, grid, cfg.solver, seed);

  report["bounds"] = to_json(b);
  report["minimizer"] = to_json(r);
  report["lagrange_defect"] = lagrange_defect(r, co.a, co.c);
  report["checks"] = sandwich_checks(b, r, co.a, co.c);
  write_stream(opts.out_dir / "pair.csv", [&](std::ostream& os) { write_pair(os, r, co.a, co.c); });
  if (opts.trace) {
    write_stream(opts.out_dir / "trace.csv", [&](std::ostream& os) { write_history(os, r.history); });
  }
  write_json(opts.out_dir / "report.json", report);
  Json timings;
  timings["minimize_seconds"] = seconds_since(t0);
  write_json(opts.out_dir / "timings.json", timings);
  return r.converged() ? kExitOk : kExitNonConvergence;
}

int cmd_wave(const RunConfig& cfg, const CommandOptions& opts) {
  const auto t0 = Clock::now();
  Json report;
  Coefficients co;
  std::optional<MinimizerResult> source;
  BoundsReport b;

  if (opts.pair_file) {
    PairFile pf = [&] {
      std::ifstream is(*opts.pair_file);
      if (!is) throw ParseError("cannot open " + opts.pair_file->string());
      return read_pair(is);
    }();
    co = {pf.a, 0.0, pf.c, 0.0};
    const RegimeReport rr = validate_solver_regime(co);
    report["config"] = config_echo(cfg);
    report["regime"] = regime_json(co, rr);
    if (!rr.accepted) {
      write_json(opts.out_dir / "report.json", report);
      return kExitRegime;
    }
    if (!(pf.lambda < 0.0)) {
      report["error"] = "lambda >= 0 in loaded pair";
      write_json(opts.out_dir / "report.json", report);
      return kExitBadLambda;
    }
    source = result_from_pair(pf);
    b = bounds_report(co.a, co.c, pf.mu, seed_profile(cfg.seed_profile));
  } else {
    if (!admit(cfg, opts, report, co)) return kExitRegime;
    const double mu = resolve_mu(cfg, co.a, co.c);
    const Field seed = seed_profile(cfg.seed_profile);
    b = bounds_report(co.a, co.c, mu, seed);
    source = minimize(co.a, co.c, mu, minimizer_grid(cfg, co.a, co.c, mu), cfg.solver, seed);
    report["minimizer"] = to_json(*source);
    write_stream(opts.out_dir / "pair.csv",
                 [&](std::ostream& os) { write_pair(os, *source, co.a, co.c); });
    if (!source->converged()) {
      write_json(opts.out_dir / "report.json", report);
      return kExitNonConvergence;
    }
    if (!(source->lambda < 0.0)) {
      write_json(opts.out_dir / "report.json", report);
      return kExitBadLambda;
    }
  }
  report["bounds"] = to_json(b);

  const Grid wg = wave_grid(*source, co.a, co.c, cfg.wave_points(), cfg.wave_decay_lengths);
  const Wave w = build_wave(*source, wg);
  const WaveReport rep = verify(w, co.a, co.c, b.c1);
  report["wave"] = to_json(rep, w);
  write_stream(opts.out_dir / "wave.csv", [&](std::ostream& os) { write_wave(os, w); });
  if (opts.mirror) {
    const Wave m = mirror(w);
    report["mirror_omega"] = m.omega;
    write_stream(opts.out_dir / "mirror.csv", [&](std::ostream& os) { write_wave(os, m); });
  }
  write_json(opts.out_dir / "report.json", report);
  Json timings;
  timings["wave_seconds"] = seconds_since(t0);
  write_json(opts.out_dir / "timings.json", timings);
  return rep.all_pass() ? kExitOk : kExitCheckFailed;
}

int cmd_evolve(const RunConfig& cfg, const CommandOptions& opts) {
  const auto t0 = Clock::now();
  Json report;
  Coefficients co;
  if (!admit(cfg, opts, report, co)) return kExitRegime;

  std::optional<Wave> w;
  if (opts.wave_file) {
    std::ifstream is(*opts.wave_file);
    if (!is) throw ParseError("cannot open " + opts.wave_file->string());
    w = read_wave(is);
  } else {
    const double mu = resolve_mu(cfg, co.a, co.c);
    const PointResult pr = run_point(cfg, co.a, co.c, mu);
    if (pr.minimizer) report["minimizer"] = to_json(*pr.minimizer);
    if (!pr.wave) {
      report["error"] = pr.error;
      write_json(opts.out_dir / "report.json", report);
      return pr.minimizer && !pr.minimizer->converged() ? kExitNonConvergence : kExitBadLambda;
    }
    w = pr.wave;
    write_stream(opts.out_dir / "wave.csv", [&](std::ostream& os) { write_wave(os, *w); });
  }

  const double factor = cfg.evolve_domain_factor.value_or(spectral_widen_factor(*w));
  w = widen(*w, factor);
  report["evolve_grid"] = {
      {"n", w->phi.grid().size()}, {"L", w->phi.grid().length()}, {"factor", factor}};

  EvolveConfig ec = cfg.evolve;
  if (cfg.evolve_auto_t_final && w->omega != 0.0) ec.t_final = 1.0 / std::abs(w->omega);
  ec.t_final = std::max(ec.t_final, ec.dt);
  report["evolve"] = {{"dt", ec.dt}, {"t_final", ec.t_final}, {"dealias", ec.dealias}};

  EvolutionDiagnostics d;
  try {
    d = evolve(FieldPair(w->phi, w->psi), co.a, co.c, ec, &*w);
  } catch (const BlowupDetected& e) {
    report["error"] = e.what();
    write_json(opts.out_dir / "report.json", report);
    return kExitBlowup;
  }
  write_stream(opts.out_dir / "diagnostics.csv", [&](std::ostream& os) { write_diagnostics(os, d); });

  CheckList checks;
  checks.emplace_back("propagation_error", check(d.max_propagation_error() <= 1e-3));
  checks.emplace_back("hamiltonian_drift", check(d.max_relative_h_drift() <= 1e-8));
  checks.emplace_back("mass_u_drift",
                      check(d.max_mass_drift_u() <= 1e-12 * (1.0 + std::abs(d.mass_u.front()))));
  checks.emplace_back("mass_eta_drift",
                      check(d.max_mass_drift_eta() <= 1e-12 * (1.0 + std::abs(d.mass_eta.front()))));
  report["diagnostics"] = to_json(d);
  report["checks"] = to_json(checks);
  write_json(opts.out_dir / "report.json", report);
  Json timings;
  timings["evolve_seconds"] = seconds_since(t0);
  write_json(opts.out_dir / "timings.json", timings);
  return any_failed(checks) ? kExitCheckFailed : kExitOk;
}

int cmd_verify(const RunConfig& cfg, const CommandOptions& opts) {
  const auto t0 = Clock::now();
  Json report;
  Coefficients co;
  if (!admit(cfg, opts, report, co)) return kExitRegime;
  const VerifyResult v = run_verify_suite(cfg, opts.jobs);
  report["checks"] = to_json(v.checks);
  report["details"] = v.details;
  write_json(opts.out_dir / "report.json", report);
  Json timings;
  timings["verify_seconds"] = seconds_since(t0);
  write_json(opts.out_dir / "timings.json", timings);
  return v.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const RunConfig& cfg, const CommandOptions& opts) {
  const auto t0 = Clock::now();
  Json report;
  Coefficients co;
  if (!admit(cfg, opts, report, co)) return kExitRegime;

  const std::vector<double> as = cfg.sweep_a ? cfg.sweep_a->values : std::vector<double>{co.a};
  const std::vector<double> cs = cfg.sweep_c ? cfg.sweep_c->values : std::vector<double>{co.c};
  const Field seed = seed_profile(cfg.seed_profile);

  struct Task {
    double a, c, mu;
  };
  std::vector<Task> tasks;
  for (double a : as) {
    for (double c : cs) {
      if (!cfg.sweep_mu) {
        tasks.push_back({a, c, std::numeric_limits<double>::quiet_NaN()});
        continue;
      }
      for (double m : cfg.sweep_mu->values) tasks.push_back({a, c, m});
    }
  }

  std::vector<PointResult> results(tasks.size());
  parallel_for(tasks.size(), opts.jobs, [&](std::size_t i) {
    const Task& t = tasks[i];
    double mu = t.mu;
    try {
      const RegimeReport rr = validate_solver_regime({t.a, 0.0, t.c, 0.0});
      if (!rr.accepted) throw std::invalid_argument("regime " + rr.summary());
      if (std::isnan(mu)) {
        mu = resolve_mu(cfg, t.a, t.c);
      } else if (cfg.sweep_mu_in_mu0) {
        mu *= bounds_report(t.a, t.c, 1.0, seed).mu0;
      }
    } catch (const std::exception& e) {
      results[i].a = t.a;
      results[i].c = t.c;
      results[i].error = e.what();
      return;
    }
    results[i] = run_point(cfg, t.a, t.c, mu);
    const PointResult& pr = results[i];
    const fs::path dir = opts.out_dir / ("point_" + std::to_string(i));
    Json pj;
    pj["a"] = pr.a;
    pj["c"] = pr.c;
    pj["mu"] = pr.mu;
    pj["bounds"] = to_json(pr.bounds);
    if (pr.minimizer) {
      pj["minimizer"] = to_json(*pr.minimizer);
      write_stream(dir / "pair.csv", [&](std::ostream& os) { write_pair(os, *pr.minimizer, pr.a, pr.c); });
    }
    if (pr.wave) {
      pj["wave"] = to_json(*pr.report, *pr.wave);
      write_stream(dir / "wave.csv", [&](std::ostream& os) { write_wave(os, *pr.wave); });
    }
    if (!pr.error.empty()) pj["error"] = pr.error;
    write_json(dir / "report.json", pj);
  });

  std::ostringstream csv;
  csv << "# mu m lambda omega l2_size l2_ratio alpha_phi\n";
  Json points = Json::array();
  std::size_t ok = 0;
  double last_a = std::numeric_limits<double>::quiet_NaN();
  double last_c = last_a;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const PointResult& pr = results[i];
    Json pj;
    pj["index"] = i;
    pj["a"] = pr.a;
    pj["c"] = pr.c;
    pj["mu"] = pr.mu;
    const bool good = pr.error.empty() && pr.report.has_value();
    pj["ok"] = good;
    if (pr.minimizer) pj["status"] = to_string(pr.minimizer->status);
    if (!good) {
      pj["error"] = pr.error;
      std::cerr << "sweep point " << i << " failed: " << pr.error << '\n';
      points.push_back(pj);
      continue;
    }
    ++ok;
    if (!pr.minimizer->converged()) {
      std::cerr << "sweep point " << i << ": " << to_string(pr.minimizer->status)
                << " at residual " << pr.minimizer->residual << '\n';
    }
    if (pr.a != last_a || pr.c != last_c) {
      csv << "# a=" << format_double(pr.a) << " c=" << format_double(pr.c) << '\n';
      last_a = pr.a;
      last_c = pr.c;
    }
    const auto& r = *pr.minimizer;
    const auto& w = *pr.report;
    csv << format_double(pr.mu) << ' ' << format_double(r.m_value) << ' '
        << format_double(r.lambda) << ' ' << format_double(pr.wave->omega) << ' '
        << format_double(w.l2_size) << ' ' << format_double(w.l2_bound_ratio) << ' '
        << format_double(w.decay_alpha_phi) << '\n';
    pj["omega"] = pr.wave->omega;
    pj["l2_ratio"] = w.l2_bound_ratio;
    points.push_back(pj);
  }
  write_text_file(opts.out_dir / "sweep.csv", csv.str());
  report["points"] = points;
  report["succeeded"] = ok;
  write_json(opts.out_dir / "report.json", report);
  Json timings;
  timings["sweep_seconds"] = seconds_since(t0);
  write_json(opts.out_dir / "timings.json", timings);
  return ok == 0 ? kExitSweepFailed : kExitOk;
}

}  // namespace bwave
