// Command line front end: scatlab [flow|solve|scatter|norms|verify-all] [options]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "scatlab/config.hpp"
#include "scatlab/errors.hpp"
#include "scatlab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Schroedinger scattering laboratory"};
  std::string config_path;
  std::string experiment;
  std::string out_dir;
  std::string data_path;
  long long seed = -1;
  int refine = 0;

  app.add_option("--config", config_path, "YAML experiment config")->check(CLI::ExistingFile);
  app.add_option("--experiment", experiment, "flow, solve, scatter, norms or verify-all");
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("--seed", seed, "random seed (overrides seed)")->check(CLI::NonNegativeNumber);
  app.add_option("--refine", refine, "double the number of time steps K times")->check(CLI::Range(0, 6));
  app.add_option("--data", data_path, "data function base path (.json sidecar + .c64) for scatter/norms");
  for (const char* name : {"flow", "solve", "scatter", "norms", "verify-all"}) {
    app.add_subcommand(name, std::string("run the ") + name + " experiment")->fallthrough();
  }
  app.require_subcommand(0, 1);
  CLI11_PARSE(app, argc, argv);

  try {
    scatlab::ExperimentConfig config;
    if (!config_path.empty()) config = scatlab::load_config(config_path);
    if (!app.get_subcommands().empty()) {
      const std::string sub = app.get_subcommands().front()->get_name();
      if (!experiment.empty() && experiment != sub) {
        throw scatlab::Error(scatlab::ErrorKind::ConfigInvalid, "--experiment conflicts with subcommand " + sub);
      }
      experiment = sub;
    }
    if (!experiment.empty()) config.experiment = scatlab::parse_experiment(experiment);
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
    config.grid = scatlab::refine_grid(config.grid, refine);
    config.validate();
    scatlab::RunOptions options;
    options.data_path = data_path;
    std::cerr << "scatlab " << scatlab::to_string(config.experiment) << " -> " << config.output_dir.string() << '\n';
    return scatlab::run(config, std::cout, options);
  } catch (const scatlab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
