#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bwave/config.hpp"
#include "bwave/io.hpp"
#include "bwave/pipeline.hpp"

int main(int argc, char** argv) {
  using namespace bwave;

  CLI::App app{"Traveling waves of the Boussinesq system by constrained minimization"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  CommandOptions opts;
  std::string pair_file, wave_file;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key = value config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_flag("--trace", opts.trace, "write per-iteration trace");
    sub->add_option("--jobs", opts.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  };

  auto* minimize = app.add_subcommand("minimize", "solve the constrained minimization");
  auto* wave = app.add_subcommand("wave", "build and verify the traveling wave");
  auto* evolve = app.add_subcommand("evolve", "time-evolve the wave and check rigid propagation");
  auto* verify = app.add_subcommand("verify", "run the inequality and property suite");
  auto* sweep = app.add_subcommand("sweep", "run the pipeline over a parameter sweep");
  for (auto* s : {minimize, wave, evolve, verify, sweep}) add_common(s);
  wave->add_flag("--mirror", opts.mirror, "also emit the mirror wave");
  wave->add_option("--pair", pair_file, "start from a saved pair.csv");
  evolve->add_option("--wave", wave_file, "start from a saved wave.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  try {
    const RunConfig cfg = load_config(config_path, process_env());
    opts.out_dir = out_dir.empty() ? std::filesystem::path(cfg.output_dir) : std::filesystem::path(out_dir);
    if (!pair_file.empty()) opts.pair_file = pair_file;
    if (!wave_file.empty()) opts.wave_file = wave_file;
    std::filesystem::create_directories(opts.out_dir);

    if (minimize->parsed()) return cmd_minimize(cfg, opts);
    if (wave->parsed()) return cmd_wave(cfg, opts);
    if (evolve->parsed()) return cmd_evolve(cfg, opts);
    if (verify->parsed()) return cmd_verify(cfg, opts);
    return cmd_sweep(cfg, opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
