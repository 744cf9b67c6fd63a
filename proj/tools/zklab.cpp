// zklab: pseudo-spectral gZK simulator and analyticity-radius lab.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zk/errors.hpp"
#include "zk/harness.hpp"

namespace {

zk::RunConfig load_config(const std::string& path, const std::string& out,
                          bool have_seed, std::uint64_t seed) {
  zk::RunConfig cfg =
      path.empty() ? zk::parse_config("") : zk::parse_config_file(path);
  if (!out.empty()) cfg = zk::config_with_value(cfg, "output.dir", out);
  if (have_seed) {
    const std::string s = std::to_string(seed);
    cfg = zk::config_with_value(cfg, "probes.seed", s);
    cfg = zk::config_with_value(cfg, "initial_data.seed", s);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zklab: 2D (m)ZK pseudo-spectral simulator and radius-of-"
               "analyticity diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  std::string config_path, out_dir;
  bool force = false;
  std::uint64_t seed = 0;
  bool have_seed = false;
  app.add_option("--out", out_dir, "Output directory (overrides config)");
  app.add_flag("--force", force, "Allow writing into a non-empty directory");
  app.add_option("--seed", seed, "Override the random seed")
      ->each([&](const std::string&) { have_seed = true; });

  auto* sim = app.add_subcommand("simulate", "Evolve and write diagnostics");
  sim->add_option("--config", config_path, "Config file");

  auto* rad = app.add_subcommand("radius-track",
                                 "Track sigma_hat(T) against the bounds");
  rad->add_option("--config", config_path, "Config file");

  std::string probe_name;
  auto* prb = app.add_subcommand("probe", "Run an inequality probe");
  prb->add_option("name", probe_name,
                  "scalar|bilinear|trilinear|commutator|almost_conservation|"
                  "strichartz")
      ->required();
  prb->add_option("--config", config_path, "Config file");

  std::string axis;
  std::vector<std::string> values;
  auto* swp = app.add_subcommand("sweep", "Sweep one config key");
  swp->add_option("--config", config_path, "Config file");
  swp->add_option("--axis", axis, "Config key, e.g. integrator.dt")
      ->required();
  swp->add_option("--values", values, "Comma-separated values")
      ->required()
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    zk::RunConfig cfg = load_config(config_path, out_dir, have_seed, seed);
    if (sim->parsed()) return zk::run_simulate(cfg, force);
    if (rad->parsed()) return zk::run_radius_track(cfg, force);
    if (prb->parsed()) return zk::run_probe(cfg, probe_name, force);
    if (swp->parsed()) return zk::run_sweep(cfg, axis, values, force);
  } catch (const zk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
