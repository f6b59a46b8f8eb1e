#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "trustmaze/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"trustmaze: turn-based multi-agent maze simulator with trust-driven "
               "allocation of function"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = ".";
  std::string seeds_text;
  uint64_t seed = 0;
  bool seed_given = false;
  int64_t max_ticks = 0;
  bool max_ticks_given = false;
  int plot_stride = 0;
  bool plot_stride_given = false;
  bool quiet = false;

  auto add_common = [&](CLI::App* cmd, bool with_seed) {
    cmd->add_option("--scenario", scenario_path, "scenario file")->required();
    cmd->add_option("--out-dir", out_dir, "output directory (default: .)");
    cmd->add_option("--max-ticks", max_ticks, "override the scenario tick budget")
        ->each([&](const std::string&) { max_ticks_given = true; });
    cmd->add_option("--plot-stride", plot_stride, "sample trust rows every N ticks")
        ->each([&](const std::string&) { plot_stride_given = true; });
    cmd->add_flag("--quiet", quiet, "suppress the per-run summary line");
    if (with_seed)
      cmd->add_option("--seed", seed, "override the scenario seed")
          ->each([&](const std::string&) { seed_given = true; });
  };

  CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("--scenario", scenario_path, "scenario file")->required();

  CLI::App* simulate = app.add_subcommand("simulate", "run one simulation");
  add_common(simulate, true);

  CLI::App* batch = app.add_subcommand("batch", "run a seed range");
  add_common(batch, false);
  batch->add_option("--seeds", seeds_text, "seed range A..B (inclusive)")->required();

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return trustmaze::cli::cmd_validate(scenario_path, std::cout);

  if (simulate->parsed()) {
    trustmaze::cli::SimulateOptions options;
    options.scenario_path = scenario_path;
    options.out_dir = out_dir;
    options.quiet = quiet;
    if (seed_given) options.seed = seed;
    if (max_ticks_given) options.max_ticks = max_ticks;
    if (plot_stride_given) options.plot_stride = plot_stride;
    return trustmaze::cli::cmd_simulate(options, std::cout);
  }

  auto range = trustmaze::cli::parse_seed_range(seeds_text);
  if (!range) {
    std::cerr << "error: --seeds expects A..B with A <= B\n";
    return trustmaze::cli::kExitInvalidScenario;
  }
  trustmaze::cli::BatchOptions options;
  options.scenario_path = scenario_path;
  options.out_dir = out_dir;
  options.quiet = quiet;
  options.seed_begin = range->first;
  options.seed_end = range->second;
  if (max_ticks_given) options.max_ticks = max_ticks;
  if (plot_stride_given) options.plot_stride = plot_stride;
  return trustmaze::cli::cmd_batch(options, std::cout);
}
