#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bwave/config.hpp"
#include "bwave/evolver.hpp"
#include "bwave/functional.hpp"
#include "bwave/minimizer.hpp"
#include "bwave/wave.hpp"

namespace bwave {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  kExitOk = 0,
  kExitNonConvergence = 2,
  kExitRegime = 3,
  kExitBadLambda = 4,
  kExitParse = 5,
  kExitBlowup = 6,
  kExitCheckFailed = 7,
  kExitSweepFailed = 8,
};

struct CommandOptions {
  std::filesystem::path out_dir = "bwave_out";
  bool trace = false;
  bool mirror = false;
  std::size_t jobs = 1;
  std::optional<std::filesystem::path> pair_file;
  std::optional<std::filesystem::path> wave_file;
};

// One (a, c, mu) point of the minimize -> wave -> verify pipeline.
struct PointResult {
  double a = 0.0;
  double c = 0.0;
  double mu = 0.0;
  BoundsReport bounds;
  Grid grid{16, 1.0};
  std::optional<MinimizerResult> minimizer;
  std::optional<Wave> wave;
  std::optional<WaveReport> report;
  std::string error;
};

/// mu from the config: absolute, or mu_factor * mu0(a, c).
double resolve_mu(const RunConfig& cfg, double a, double c);

Grid minimizer_grid(const RunConfig& cfg, double a, double c, double mu);

/// Minimizes and, when the minimizer produced lambda < 0, builds and
/// verifies the wave. Exceptions are caught into `error`.
PointResult run_point(const RunConfig& cfg, double a, double c, double mu, bool build = true);

/// |lambda mu - (tau + 1/2 int f^2 g)| / max(1, |lambda mu|).
double lagrange_defect(const MinimizerResult& r, double a, double c);

Json to_json(const BoundsReport& b);
Json to_json(const MinimizerResult& r);
Json to_json(const WaveReport& w, const Wave& wave);
Json to_json(const EvolutionDiagnostics& d);
Json to_json(const CheckList& checks);
Json config_echo(const RunConfig& cfg);

/// Stable JSON text (2-space indent, trailing newline).
std::string dump(const Json& j);

// Verification suite shared by `verify` and the acceptance tests.
struct VerifyResult {
  CheckList checks;
  Json details;

  bool passed() const;
};

VerifyResult gradient_suite(double a, double c, std::size_t pairs, std::uint64_t seed,
                            std::size_t n, double length);
VerifyResult rearrangement_suite(double a, double c, std::size_t pairs, std::uint64_t seed,
                                 std::size_t n, double length);
VerifyResult run_verify_suite(const RunConfig& cfg, std::size_t jobs = 1);

// Subcommands. Each writes report.json (deterministic) and timings.json
// under opts.out_dir and returns the process exit code.
int cmd_minimize(const RunConfig& cfg, const CommandOptions& opts);
int cmd_wave(const RunConfig& cfg, const CommandOptions& opts);
int cmd_evolve(const RunConfig& cfg, const CommandOptions& opts);
int cmd_verify(const RunConfig& cfg, const CommandOptions& opts);
int cmd_sweep(const RunConfig& cfg, const CommandOptions& opts);

}  // namespace bwave
