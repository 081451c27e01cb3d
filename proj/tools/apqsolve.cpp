/// Command-line front end: parses a JSON problem configuration and runs one
/// pipeline stage (check | eigen | aux | frozen | solve | homotopy).

#include "apq/config_io.hpp"
#include "apq/errors.hpp"
#include "apq/run.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"anisotropic double-phase Dirichlet solver with gradient-dependent reaction"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  bool strict = true;
  app.add_option("--config", config_path, "problem configuration (JSON)")->required();
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--seed", seed, "run seed recorded in the summary");
  app.add_option("--threads", threads, "worker threads for independent solves")
      ->check(CLI::PositiveNumber);
  app.add_flag("--strict,!--no-strict", strict, "reject unknown config keys (default on)");

  std::string frozen_v = "zero";
  app.add_subcommand("check", "validate hypotheses and report");
  app.add_subcommand("eigen", "principal eigenpair and nonresonance constant");
  app.add_subcommand("aux", "auxiliary lower-bound problem");
  auto* frozen = app.add_subcommand("frozen", "solve the frozen problem for a given field");
  frozen->add_option("--v", frozen_v, "frozen field: 'zero' or a field CSV path");
  app.add_subcommand("solve", "full fixed-point pipeline");
  app.add_subcommand("homotopy", "scan u = t beta(u) over the homotopy grid");

  CLI11_PARSE(app, argc, argv);

  try {
    const apq::ProblemSpec spec = apq::parse_config(config_path, strict);
    apq::RunOptions opts;
    opts.out_dir = out_dir;
    opts.seed = seed;
    opts.threads = threads;
    opts.frozen_v = frozen_v;
    const apq::Stage stage = apq::stage_from_name(app.get_subcommands().front()->get_name());
    return apq::run_stage(spec, stage, opts);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
