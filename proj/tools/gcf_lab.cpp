// gcf-lab: numerical laboratory for anisotropic Gauss curvature flows,
// L_p surface area measures, and degenerate radial Monge-Ampere profiles.
//
//   gcf-lab <subcommand> [--config <path>] [--set key=value]...
//
// Subcommands: flow, soliton, bounds, ode, holder, measure, sweep.
// Exit codes: 0 pass, 1 check failure, 2 config error, 3 pipeline error.

#include <CLI11.hpp>

#include <string>
#include <vector>

#include "gcf/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for Gauss curvature flow and the Lp "
               "Minkowski problem"};
  app.set_version_flag("--version", gcf::kVersion);

  std::string subcommand;
  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("subcommand", subcommand,
                 "flow | soliton | bounds | ode | holder | measure | sweep")
      ->required();
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--set", overrides, "override config entries (later wins)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gcf::kExitConfigError;
  }

  try {
    const gcf::RunConfig cfg =
        gcf::RunConfig::load(subcommand, config_path, overrides);
    return gcf::run(cfg);
  } catch (const gcf::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return gcf::kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pipeline error: %s\n", e.what());
    return gcf::kExitPipelineError;
  }
}
