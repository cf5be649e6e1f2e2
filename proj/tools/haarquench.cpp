#include <cstdint>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "haarquench/cli.hpp"

namespace hq = haarquench::cli;

int main(int argc, char** argv) {
  CLI::App app{"Quenched-disorder entanglement statistics of Haar-random qubit states"};
  app.require_subcommand(1);

  hq::RunArgs run;
  std::optional<std::uint64_t> run_seed;
  auto* run_cmd = app.add_subcommand("run", "Run a preset or a config file and write CSV histograms plus summary.json");
  run_cmd->add_option("target", run.target, "Preset name or path to a key = value config file")->required();
  run_cmd->add_option("--seed", run_seed, "Master seed (default: $HAARQUENCH_SEED, else 0)");
  run_cmd->add_option("--workers", run.workers, "Worker threads (default: logical cores)");
  run_cmd->add_option("--scale", run.scale, "Multiply state and disorder-configuration counts")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run.out_dir, "Output directory")->required();
  run_cmd->add_flag("--quiet", run.quiet, "Suppress per-curve summaries");

  hq::CheckArgs check;
  std::optional<std::uint64_t> check_seed;
  auto* check_cmd = app.add_subcommand("check", "Convergence check: full run vs half-size rerun on a fresh seed");
  check_cmd->add_option("preset", check.preset, "Preset name")->required();
  check_cmd->add_option("--seed", check_seed, "Master seed (default: $HAARQUENCH_SEED, else 0)");
  check_cmd->add_option("--workers", check.workers, "Worker threads (default: logical cores)");
  check_cmd->add_option("--scale", check.scale, "Multiply state and disorder-configuration counts")
      ->check(CLI::PositiveNumber);

  hq::AcceptanceArgs acc;
  std::optional<std::uint64_t> acc_seed;
  auto* acc_cmd = app.add_subcommand("acceptance", "Run the acceptance suite and write a pass/fail report");
  acc_cmd->add_option("--out", acc.report, "Report path")->required();
  acc_cmd->add_option("--seed", acc_seed, "Master seed (default: $HAARQUENCH_SEED, else a fixed seed)");
  acc_cmd->add_option("--workers", acc.workers, "Worker threads (default: logical cores)");
  acc_cmd->add_option("--scale", acc.scale, "Multiply sample counts; tolerances widen accordingly")
      ->check(CLI::PositiveNumber);
  acc_cmd->add_option("--criteria", acc.criteria, "Run only these criteria (1-10)")->check(CLI::Range(1, 10));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(hq::ExitCode::ConfigError);
  }

  hq::ExitCode rc = hq::ExitCode::Ok;
  if (*run_cmd) {
    run.seed = run_seed;
    rc = hq::cmd_run(run, std::cout, std::cerr);
  } else if (*check_cmd) {
    check.seed = check_seed;
    rc = hq::cmd_check(check, std::cout, std::cerr);
  } else if (*acc_cmd) {
    acc.seed = acc_seed;
    rc = hq::cmd_acceptance(acc, std::cout, std::cerr);
  }
  return static_cast<int>(rc);
}
