#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bwave/config.hpp"
#include "bwave/evolver.hpp"
#include "bwave/functional.hpp"
#include "bwave/io.hpp"
#include "bwave/minimizer.hpp"
#include "bwave/params.hpp"
#include "bwave/pipeline.hpp"
#include "bwave/rearrange.hpp"
#include "bwave/wave.hpp"

namespace py = pybind11;
using namespace bwave;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const Field& u) {
  Array out(static_cast<py::ssize_t>(u.size()));
  std::copy(u.values().begin(), u.values().end(), out.mutable_data());
  return out;
}

Field to_field(const Array& a, double length) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
  const Grid g(static_cast<std::size_t>(a.shape(0)), length);
  return Field(g, std::vector<double>(a.data(), a.data() + a.shape(0)));
}

Array abscissae(const Grid& g) {
  Array out(static_cast<py::ssize_t>(g.size()));
  for (std::size_t j = 0; j < g.size(); ++j) out.mutable_data()[j] = g.x(j);
  return out;
}

py::dict checks_dict(const CheckList& checks) {
  py::dict d;
  for (const auto& [name, st] : checks) d[py::str(name)] = to_string(st);
  return d;
}

py::dict minimizer_dict(const MinimizerResult& r) {
  py::dict d;
  d["x"] = abscissae(r.pair.grid());
  d["L"] = r.pair.grid().length();
  d["f"] = to_array(r.pair.f);
  d["g"] = to_array(r.pair.g);
  d["mu"] = r.mu;
  d["m"] = r.m_value;
  d["lambda"] = r.lambda;
  d["residual"] = r.residual;
  d["iterations"] = r.iterations;
  d["status"] = to_string(r.status);
  std::vector<double> taus;
  for (const auto& h : r.history) taus.push_back(h.tau);
  d["tau_history"] = taus;
  return d;
}

py::dict wave_dict(const Wave& w, const WaveReport& rep) {
  py::dict d;
  d["x"] = abscissae(w.phi.grid());
  d["L"] = w.phi.grid().length();
  d["phi"] = to_array(w.phi);
  d["psi"] = to_array(w.psi);
  d["omega"] = w.omega;
  d["residual"] = rep.stationary_residual;
  d["l2_size"] = rep.l2_size;
  d["l2_identity"] = rep.l2_identity;
  d["l2_ratio"] = rep.l2_bound_ratio;
  d["omega_bound"] = rep.speed_bound;
  d["alpha_phi"] = rep.decay_alpha_phi;
  d["alpha_psi"] = rep.decay_alpha_psi;
  d["boundary_leak"] = rep.boundary_leak;
  d["flags"] = checks_dict(rep.flags);
  return d;
}

RunConfig coeff_config(double a, double c, std::size_t n) {
  RunConfig cfg;
  cfg.coefficients = Coefficients{a, 0.0, c, 0.0};
  cfg.grid_n = n;
  return cfg;
}

// Minimize and build the wave at one point. mu defaults to 4 mu0.
py::dict solve(double a, double c, std::optional<double> mu, std::size_t n, double tol, std::size_t max_iter) {
  RunConfig cfg = coeff_config(a, c, n);
  cfg.solver.tol = tol;
  cfg.solver.max_iter = max_iter;
  const double m = mu.value_or(resolve_mu(cfg, a, c));
  PointResult pr;
  {
    py::gil_scoped_release release;
    pr = run_point(cfg, a, c, m);
  }
  py::dict d;
  d["a"] = a;
  d["c"] = c;
  d["mu"] = m;
  d["bounds"] = py::dict(py::arg("m_lower") = pr.bounds.lower, py::arg("m_upper") = pr.bounds.upper,
                         py::arg("c1") = pr.bounds.c1, py::arg("mu0") = pr.bounds.mu0);
  if (pr.minimizer) d["minimizer"] = minimizer_dict(*pr.minimizer);
  if (pr.wave) d["wave"] = wave_dict(*pr.wave, *pr.report);
  if (!pr.error.empty()) d["error"] = pr.error;
  return d;
}

py::dict evolve_wave(const Array& phi, const Array& psi, double length, double omega, double a, double c,
                     double dt, std::optional<double> t_final, std::optional<double> domain_factor) {
  Wave w{to_field(phi, length), to_field(psi, length), omega};
  w = widen(w, domain_factor.value_or(spectral_widen_factor(w)));
  EvolveConfig ec;
  ec.dt = dt;
  ec.t_final = t_final.value_or(omega != 0.0 ? 1.0 / std::abs(omega) : 1.0);
  FieldPair last{w.phi, w.psi};
  EvolutionDiagnostics diag;
  {
    py::gil_scoped_release release;
    diag = evolve({w.phi, w.psi}, a, c, ec, &w, &last);
  }
  py::dict d;
  d["x"] = abscissae(w.phi.grid());
  d["u"] = to_array(last.f);
  d["eta"] = to_array(last.g);
  d["t"] = diag.times;
  d["H"] = diag.h_values;
  d["mass_u"] = diag.mass_u;
  d["mass_eta"] = diag.mass_eta;
  d["momentum"] = diag.momentum;
  d["prop_err"] = diag.propagation_error;
  d["max_prop_err"] = diag.max_propagation_error();
  d["h_drift"] = diag.max_relative_h_drift();
  return d;
}

int run_command(const std::string& name, const std::string& config_text, const std::string& out_dir,
                std::size_t jobs) {
  const RunConfig cfg = parse_config_text(config_text, process_env());
  CommandOptions o;
  o.out_dir = out_dir;
  o.jobs = jobs;
  std::filesystem::create_directories(o.out_dir);
  py::gil_scoped_release release;
  if (name == "minimize") return cmd_minimize(cfg, o);
  if (name == "wave") return cmd_wave(cfg, o);
  if (name == "evolve") return cmd_evolve(cfg, o);
  if (name == "verify") return cmd_verify(cfg, o);
  if (name == "sweep") return cmd_sweep(cfg, o);
  throw std::invalid_argument("unknown command '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_bwave, m) {
  m.doc() = "Traveling waves of the b = d = 0 Boussinesq system by constrained minimization";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<BlowupDetected>(m, "BlowupDetected", PyExc_RuntimeError);

  m.def(
      "abcd_from_model",
      [](double theta, double lambda_model, double mu_model, double bond) {
        const Coefficients co = abcd_from_model({theta, lambda_model, mu_model, bond});
        return py::make_tuple(co.a, co.b, co.c, co.d);
      },
      py::arg("theta"), py::arg("lambda_model") = 1.0, py::arg("mu_model") = 1.0, py::arg("bond") = 0.0);

  m.def(
      "regime",
      [](double a, double b, double c, double d) {
        const RegimeReport r = validate_solver_regime({a, b, c, d});
        return py::make_tuple(r.accepted, r.violations);
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"));

  m.def(
      "bounds",
      [](double a, double c, double mu) {
        const BoundsReport b = bounds_report(a, c, mu, seed_profile());
        return py::dict(py::arg("m_lower") = b.lower, py::arg("m_upper") = b.upper, py::arg("c1") = b.c1,
                        py::arg("mu0") = b.mu0);
      },
      py::arg("a"), py::arg("c"), py::arg("mu"));

  m.def(
      "tau",
      [](const Array& f, const Array& g, double length, double a, double c) {
        const VariationalValue v = tau({to_field(f, length), to_field(g, length)}, a, c);
        return py::dict(py::arg("tau") = v.tau, py::arg("N") = v.n_value, py::arg("cross") = v.cross,
                        py::arg("pair_inner") = v.pair_inner);
      },
      py::arg("f"), py::arg("g"), py::arg("L"), py::arg("a"), py::arg("c"));

  m.def(
      "symmetric_decreasing",
      [](const Array& u) {
        const std::vector<double> out = rearrange_samples(std::span<const double>(u.data(), u.size()));
        Array a(static_cast<py::ssize_t>(out.size()));
        std::copy(out.begin(), out.end(), a.mutable_data());
        return a;
      },
      py::arg("u"));

  m.def("solve", &solve, py::arg("a") = -1.0, py::arg("c") = -1.0, py::arg("mu") = py::none(),
        py::arg("n") = 2048, py::arg("tol") = 1e-8, py::arg("max_iter") = 50000,
        "Minimize at (a, c, mu) and build the traveling wave; mu defaults to 4 mu0.");

  m.def("evolve", &evolve_wave, py::arg("phi"), py::arg("psi"), py::arg("L"), py::arg("omega"),
        py::arg("a"), py::arg("c"), py::arg("dt") = 1e-3, py::arg("t_final") = py::none(),
        py::arg("domain_factor") = py::none(),
        "Evolve a wave profile and compare with its rigid translation.");

  m.def("run_command", &run_command, py::arg("name"), py::arg("config_text"), py::arg("out_dir"),
        py::arg("jobs") = 1, "Run a CLI subcommand on config text; returns its exit code.");
}
