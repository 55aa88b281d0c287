#include "bwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bwave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::logic_error&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
  if (v.empty() || !std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  try {
    return std::stoull(v);
  } catch (const std::out_of_range&) {
    throw ConfigError(key + ": integer out of range");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  const auto l = lower(v);
  if (l == "true" || l == "1" || l == "yes" || l == "on") return true;
  if (l == "false" || l == "0" || l == "no" || l == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, trim(item)));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

const std::vector<std::string> kKeys = {
    "coeff.a", "coeff.b", "coeff.c", "coeff.d",
    "model.theta", "model.lambda", "model.mu", "model.bond",
    "run.mu", "run.mu_factor", "run.seed_profile",
    "grid.n", "grid.L", "grid.decay_lengths",
    "solver.tol", "solver.max_iter", "solver.step0", "solver.rearrange_every",
    "solver.backtrack_factor", "solver.min_step", "solver.step_growth", "solver.max_step",
    "solver.precondition",
    "wave.n", "wave.decay_lengths",
    "evolve.dt", "evolve.t_final", "evolve.domain_factor", "evolve.dealias", "evolve.record_every",
    "sweep.a", "sweep.c", "sweep.mu", "sweep.mu_units",
    "verify.sandwich_factors", "verify.theta", "verify.sub_mu_factor", "verify.random_pairs",
    "verify.seed", "verify.random_n", "verify.random_L",
    "output.dir",
};

void apply(RunConfig& cfg, const std::string& key, const std::string& v) {
  auto coeff = [&]() -> Coefficients& {
    if (!cfg.coefficients) cfg.coefficients = Coefficients{};
    return *cfg.coefficients;
  };
  auto model = [&]() -> ModelParams& {
    if (!cfg.model) cfg.model = ModelParams{};
    return *cfg.model;
  };
  if (key == "coeff.a") coeff().a = parse_real(key, v);
  else if (key == "coeff.b") coeff().b = parse_real(key, v);
  else if (key == "coeff.c") coeff().c = parse_real(key, v);
  else if (key == "coeff.d") coeff().d = parse_real(key, v);
  else if (key == "model.theta") model().theta = parse_real(key, v);
  else if (key == "model.lambda") model().lambda_model = parse_real(key, v);
  else if (key == "model.mu") model().mu_model = parse_real(key, v);
  else if (key == "model.bond") model().tau_bond = parse_real(key, v);
  else if (key == "run.mu") cfg.mu = parse_real(key, v);
  else if (key == "run.mu_factor") cfg.mu_factor = parse_real(key, v);
  else if (key == "run.seed_profile") {
    try {
      cfg.seed_profile = parse_seed_profile(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key + ": " + e.what());
    }
  } else if (key == "grid.n") cfg.grid_n = parse_count(key, v);
  else if (key == "grid.L") {
    if (lower(v) == "auto") cfg.grid_length.reset();
    else cfg.grid_length = parse_real(key, v);
  } else if (key == "grid.decay_lengths") cfg.grid_decay_lengths = parse_real(key, v);
  else if (key == "solver.tol") cfg.solver.tol = parse_real(key, v);
  else if (key == "solver.max_iter") cfg.solver.max_iter = parse_count(key, v);
  else if (key == "solver.step0") cfg.solver.step0 = parse_real(key, v);
  else if (key == "solver.rearrange_every") cfg.solver.rearrange_every = parse_count(key, v);
  else if (key == "solver.backtrack_factor") cfg.solver.backtrack_factor = parse_real(key, v);
  else if (key == "solver.min_step") cfg.solver.min_step = parse_real(key, v);
  else if (key == "solver.step_growth") cfg.solver.step_growth = parse_real(key, v);
  else if (key == "solver.max_step") cfg.solver.max_step = parse_real(key, v);
  else if (key == "solver.precondition") cfg.solver.precondition = parse_bool(key, v);
  else if (key == "wave.n") cfg.wave_n = parse_count(key, v);
  else if (key == "wave.decay_lengths") cfg.wave_decay_lengths = parse_real(key, v);
  else if (key == "evolve.dt") cfg.evolve.dt = parse_real(key, v);
  else if (key == "evolve.t_final") {
    if (lower(v) == "auto") {
      cfg.evolve_auto_t_final = true;
    } else {
      cfg.evolve.t_final = parse_real(key, v);
      cfg.evolve_auto_t_final = false;
    }
  } else if (key == "evolve.domain_factor") {
    if (lower(v) == "auto") cfg.evolve_domain_factor.reset();
    else cfg.evolve_domain_factor = parse_real(key, v);
  }
  else if (key == "evolve.dealias") cfg.evolve.dealias = parse_bool(key, v);
  else if (key == "evolve.record_every") cfg.evolve.record_every = parse_count(key, v);
  else if (key == "sweep.a" || key == "sweep.c" || key == "sweep.mu") {
    Progression p;
    try {
      p = Progression::parse(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key + ": " + e.what());
    }
    if (key == "sweep.a") cfg.sweep_a = p;
    else if (key == "sweep.c") cfg.sweep_c = p;
    else cfg.sweep_mu = p;
  } else if (key == "sweep.mu_units") {
    const auto l = lower(v);
    if (l == "mu0") cfg.sweep_mu_in_mu0 = true;
    else if (l == "absolute") cfg.sweep_mu_in_mu0 = false;
    else throw ConfigError(key + ": expected mu0 or absolute");
  } else if (key == "verify.sandwich_factors") cfg.verify_sandwich_factors = parse_list(key, v);
  else if (key == "verify.theta") cfg.verify_theta = parse_list(key, v);
  else if (key == "verify.sub_mu_factor") cfg.verify_sub_mu_factor = parse_real(key, v);
  else if (key == "verify.random_pairs") cfg.verify_random_pairs = parse_count(key, v);
  else if (key == "verify.seed") cfg.verify_seed = parse_count(key, v);
  else if (key == "verify.random_n") cfg.verify_random_n = parse_count(key, v);
  else if (key == "verify.random_L") cfg.verify_random_length = parse_real(key, v);
  else if (key == "output.dir") cfg.output_dir = v;
  else throw ConfigError("unknown config key '" + key + "'");
}

void check(const RunConfig& cfg) {
  if (cfg.coefficients.has_value() == cfg.model.has_value()) {
    throw ConfigError("exactly one of coeff.* or model.* must be given");
  }
  if (cfg.mu && !(*cfg.mu > 0.0)) throw ConfigError("run.mu must be positive");
  if (!(cfg.mu_factor > 0.0)) throw ConfigError("run.mu_factor must be positive");
  if (cfg.grid_n < 16 || cfg.grid_n % 2 != 0) throw ConfigError("grid.n must be even and >= 16");
  if (cfg.grid_length && !(*cfg.grid_length > 0.0)) throw ConfigError("grid.L must be positive");
  if (!(cfg.grid_decay_lengths > 0.0)) throw ConfigError("grid.decay_lengths must be positive");
  if (cfg.wave_n && (*cfg.wave_n < 16 || *cfg.wave_n % 2 != 0)) {
    throw ConfigError("wave.n must be even and >= 16");
  }
  if (!(cfg.wave_decay_lengths > 0.0)) throw ConfigError("wave.decay_lengths must be positive");
  try {
    cfg.solver.validate();
    EvolveConfig e = cfg.evolve;
    if (cfg.evolve_auto_t_final) e.t_final = std::max(e.t_final, e.dt);
    e.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  if (cfg.evolve_domain_factor && !(*cfg.evolve_domain_factor >= 1.0)) throw ConfigError("evolve.domain_factor must be >= 1");
  if (cfg.verify_random_n < 16 || cfg.verify_random_n % 2 != 0) {
    throw ConfigError("verify.random_n must be even and >= 16");
  }
  if (!(cfg.verify_random_length > 0.0)) throw ConfigError("verify.random_L must be positive");
  if (!(cfg.verify_sub_mu_factor > 0.0)) throw ConfigError("verify.sub_mu_factor must be positive");
  for (double t : cfg.verify_theta) {
    if (!(t > 1.0)) throw ConfigError("verify.theta entries must exceed 1");
  }
  for (double f : cfg.verify_sandwich_factors) {
    if (!(f > 0.0)) throw ConfigError("verify.sandwich_factors must be positive");
  }
}

}  // namespace

Progression Progression::parse(const std::string& raw) {
  const std::string text = trim(raw);
  Progression p;
  p.text = text;
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto t = trim(item);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(t, &used);
      } catch (const std::logic_error&) {
        throw std::invalid_argument("bad value '" + t + "'");
      }
      if (used != t.size() || !std::isfinite(v)) throw std::invalid_argument("bad value '" + t + "'");
      p.values.push_back(v);
    }
    if (p.values.empty()) throw std::invalid_argument("empty progression");
    return p;
  }

  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  if (parts.size() != 4) throw std::invalid_argument("expected kind:start:stop:count");
  double start = 0.0, stop = 0.0;
  long long count = 0;
  try {
    start = std::stod(parts[1]);
    stop = std::stod(parts[2]);
    count = std::stoll(parts[3]);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("malformed progression '" + text + "'");
  }
  if (count < 1 || count > 100000) throw std::invalid_argument("progression count out of range");
  const auto kind = lower(parts[0]);
  const auto n = static_cast<std::size_t>(count);
  p.values.resize(n);
  if (kind == "arithmetic") {
    for (std::size_t i = 0; i < n; ++i) {
      p.values[i] = n == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
  } else if (kind == "geometric") {
    if (!(start > 0.0) || !(stop > 0.0)) throw std::invalid_argument("geometric bounds must be positive");
    const double r = std::log(stop / start);
    for (std::size_t i = 0; i < n; ++i) {
      p.values[i] = n == 1 ? start : start * std::exp(r * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    // Hit the end point exactly.
    p.values.back() = n == 1 ? start : stop;
  } else {
    throw std::invalid_argument("unknown progression kind '" + parts[0] + "'");
  }
  return p;
}

Coefficients RunConfig::resolved_coefficients() const {
  if (coefficients) return *coefficients;
  if (model) return abcd_from_model(*model);
  throw ConfigError("no coefficients configured");
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
}

std::string env_name(const std::string& key) {
  std::string out = "BW_";
  for (char ch : key) {
    out.push_back(ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  }
  return out;
}

const std::vector<std::string>& known_config_keys() { return kKeys; }

RunConfig parse_config(std::istream& is, const EnvLookup& env) {
  std::map<std::string, std::string> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown config key '" + key + "'");
    }
    if (entries.count(key) != 0) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    entries[key] = value;
  }
  if (env) {
    for (const auto& key : kKeys) {
      if (auto v = env(env_name(key))) entries[key] = trim(*v);
    }
  }

  RunConfig cfg;
  for (const auto& [key, value] : entries) apply(cfg, key, value);
  cfg.entries = entries;
  check(cfg);
  return cfg;
}

RunConfig parse_config_text(const std::string& text, const EnvLookup& env) {
  std::istringstream is(text);
  return parse_config(is, env);
}

RunConfig load_config(const std::string& path, const EnvLookup& env) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  return parse_config(is, env);
}

}  // namespace bwave
