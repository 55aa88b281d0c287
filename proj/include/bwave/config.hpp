#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bwave/evolver.hpp"
#include "bwave/functional.hpp"
#include "bwave/minimizer.hpp"
#include "bwave/params.hpp"

namespace bwave {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Finite list of values: "v", "v1,v2,...", "geometric:start:stop:count" or
// "arithmetic:start:stop:count".
struct Progression {
  std::vector<double> values;

  /// Throws std::invalid_argument on malformed text.
  static Progression parse(const std::string& text);
  std::string text;  // as written
};

struct RunConfig {
  // Exactly one of the two is set.
  std::optional<Coefficients> coefficients;
  std::optional<ModelParams> model;

  // Constraint mass: absolute, or as a multiple of mu0.
  std::optional<double> mu;
  double mu_factor = 4.0;
  SeedProfile seed_profile = SeedProfile::Gaussian;

  std::size_t grid_n = 2048;
  std::optional<double> grid_length;  // nullopt: auto
  double grid_decay_lengths = 200.0;

  MinimizerConfig solver;

  std::optional<std::size_t> wave_n;
  double wave_decay_lengths = 30.0;

  EvolveConfig evolve;
  bool evolve_auto_t_final = true;
  std::optional<double> evolve_domain_factor;  // nullopt: from the wave spectrum

  std::optional<Progression> sweep_a;
  std::optional<Progression> sweep_c;
  std::optional<Progression> sweep_mu;
  bool sweep_mu_in_mu0 = true;

  std::vector<double> verify_sandwich_factors{1.0, 2.0, 5.0, 10.0};
  std::vector<double> verify_theta{1.5, 2.0};
  double verify_sub_mu_factor = 4.0;
  std::size_t verify_random_pairs = 100;
  std::uint64_t verify_seed = 20140803;
  std::size_t verify_random_n = 512;
  double verify_random_length = 40.0;

  std::string output_dir = "bwave_out";

  // Every key that was set, after env overrides, in key order.
  std::map<std::string, std::string> entries;

  Coefficients resolved_coefficients() const;
  std::size_t wave_points() const { return wave_n.value_or(grid_n); }
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Environment lookup through std::getenv.
EnvLookup process_env();

/// Name of the environment override for a key: "grid.n" -> "BW_GRID_N".
std::string env_name(const std::string& key);

/// Parses flat "key = value" text with '#' comments. Unknown keys and
/// malformed values throw ConfigError.
RunConfig parse_config(std::istream& is, const EnvLookup& env = {});
RunConfig parse_config_text(const std::string& text, const EnvLookup& env = {});
RunConfig load_config(const std::string& path, const EnvLookup& env = {});

const std::vector<std::string>& known_config_keys();

}  // namespace bwave
