#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mobcon/mobcon.hpp"

namespace {

int default_workers() {
  if (const char* env = std::getenv("MOBCON_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mobility-driven contagion simulation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  uint64_t rng_seed = 0;
  int workers = default_workers();
  bool quiet = false;

  CLI::App* run_cmd = app.add_subcommand("run", "replay one experiment and write its outputs");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run an experiment across a parameter grid");
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "mobility replay vs contact-graph / homogeneous models");
  CLI::App* ingest_cmd =
      app.add_subcommand("ingest", "normalize raw input into the toolkit's file formats");
  CLI::App* validate_cmd = app.add_subcommand("validate", "parse and check a config file");

  for (CLI::App* cmd : {run_cmd, sweep_cmd, compare_cmd, ingest_cmd, validate_cmd}) {
    cmd->add_option("--config", config_path, "experiment config file")->required();
    cmd->add_option("--out", out_dir, "override the [outputs] directory");
    cmd->add_option("--rng-seed", rng_seed, "override the [seeds] rng_seed");
    cmd->add_option("--workers", workers, "threads across ensemble members")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--quiet", quiet, "suppress progress output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems count as config errors
  }

  CLI::App* active = app.get_subcommands().front();
  mobcon::RunnerOptions opts;
  opts.workers = workers;
  opts.quiet = quiet;
  if (active->count("--out")) opts.out_dir = out_dir;
  if (active->count("--rng-seed")) opts.rng_seed = rng_seed;

  try {
    const mobcon::ExperimentConfig cfg = mobcon::load_experiment_config(config_path);
    if (active == validate_cmd) {
      if (!quiet)
        std::cout << "config ok: mode " << mobcon::mode_name(cfg.model.mode) << ", format "
                  << cfg.dataset.format << ", " << cfg.seeds.n_runs << " runs x "
                  << cfg.seeds.n_seeds << " seeds, intervention " << cfg.intervention.kind
                  << ", outputs " << cfg.output_dir << "\n";
      return 0;
    }
    if (active == run_cmd) {
      mobcon::cmd_run(cfg, opts);
    } else if (active == sweep_cmd) {
      mobcon::cmd_sweep(cfg, opts);
    } else if (active == compare_cmd) {
      mobcon::cmd_compare(cfg, opts);
    } else {
      mobcon::cmd_ingest(cfg, opts);
    }
    return 0;
  } catch (const mobcon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mobcon::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const mobcon::SeedError& e) {
    std::cerr << "seed error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
