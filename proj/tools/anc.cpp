// anc: run, compare, and export active-noise-control simulations.

#include "anc/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_common(CLI::App* cmd, anc::cli::Invocation& inv) {
  cmd->add_option("--config", inv.config, "JSON experiment file");
  cmd->add_option("--preset", inv.preset, "Built-in preset: paper, paper-fxlms, paper-kalman");
  cmd->add_option("--out", inv.out_dir, "Output directory (falls back to $ANC_OUT, then .)");
  cmd->add_option("--seed", inv.seed, "Override the noise seed of every experiment");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active noise control simulator: FxLMS and Kalman-filter controllers"};
  app.require_subcommand(1);

  anc::cli::Invocation inv;
  auto* run = app.add_subcommand("run", "Run every experiment; write <name>.csv and <name>.summary.json");
  auto* compare = app.add_subcommand("compare", "Run the compare list; write compare.csv/.summary.json/.svg");
  auto* paths = app.add_subcommand("paths", "Export primary and secondary path taps as CSV and SVG");
  for (auto* cmd : {run, compare, paths}) add_common(cmd, inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return anc::cli::kConfigError;
  }

  if (run->parsed()) return anc::cli::cmd_run(inv, std::cout, std::cerr);
  if (compare->parsed()) return anc::cli::cmd_compare(inv, std::cout, std::cerr);
  return anc::cli::cmd_paths(inv, std::cout, std::cerr);
}
