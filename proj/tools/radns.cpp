#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "radns/checkpoint.hpp"
#include "radns/commands.hpp"
#include "radns/config.hpp"

namespace fs = std::filesystem;
using namespace radns;

namespace {

void report(const cli::Outcome& outcome, bool quiet, const char* what) {
  if (quiet) return;
  std::cerr << what << ": " << (outcome.status == cli::kExitOk ? "pass" : "FAIL") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic 1D radiation hydrodynamics solver and auditor"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet,-q", quiet, "Suppress progress output");

  std::string config_path, out_dir, resume_path;

  auto* run = app.add_subcommand("run", "Simulate and audit a configured run");
  run->add_option("--config,-c", config_path, "Run configuration (INI)")->required();
  run->add_option("--out,-o", out_dir, "Output directory (overrides [output] directory)");
  run->add_option("--resume", resume_path, "Checkpoint to continue from");

  double a = 1.0, b = 1.0;
  std::size_t truncation = 100'000, points = 1000;
  auto* kernel = app.add_subcommand("kernel", "Tabulate and certify the radiation kernel");
  kernel->add_option("--out,-o", out_dir, "Output directory")->default_val("kernel_out");
  kernel->add_option("--config,-c", config_path, "Take a and b from [physics] of this file");
  kernel->add_option("--truncation", truncation, "Series truncation M")->capture_default_str();
  kernel->add_option("--points", points, "Tabulation points")->capture_default_str();

  std::size_t betas = 200, probes = 10'000;
  auto* exps = app.add_subcommand("exponents", "Admissibility search and consistency sweep");
  exps->add_option("--out,-o", out_dir, "Output directory")->default_val("exponents_out");
  exps->add_option("--betas", betas, "Number of beta values")->capture_default_str();
  exps->add_option("--probes", probes, "Quasi-random consistency probes")->capture_default_str();

  auto* mms = app.add_subcommand("mms", "Manufactured-solution convergence study");
  mms->add_option("--out,-o", out_dir, "Output directory")->default_val("mms_out");
  mms->add_option("--config,-c", config_path, "Take [physics] from this file");

  auto* verify = app.add_subcommand("verify", "Re-audit a finished run directory");
  verify->add_option("--out,-o,dir", out_dir, "Run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const RunConfig config = parse_config(config_path);
      const fs::path dir = out_dir.empty() ? fs::path(config.output_dir) : fs::path(out_dir);
      std::optional<fs::path> resume;
      if (!resume_path.empty()) resume = resume_path;
      const cli::Outcome outcome = cli::run_command(config, dir, resume, quiet);
      return outcome.status;
    }
    if (kernel->parsed()) {
      if (!config_path.empty()) {
        const RunConfig config = parse_config(config_path);
        a = config.params.a;
        b = config.params.b;
      }
      const cli::Outcome outcome = cli::kernel_command(out_dir, a, b, truncation, points);
      report(outcome, quiet, "kernel");
      return outcome.status;
    }
    if (exps->parsed()) {
      const cli::Outcome outcome = cli::exponents_command(out_dir, betas, probes);
      report(outcome, quiet, "exponents");
      return outcome.status;
    }
    if (mms->parsed()) {
      Params params;
      if (!config_path.empty()) params = parse_config(config_path).params;
      const cli::Outcome outcome = cli::mms_command(out_dir, params);
      report(outcome, quiet, "mms");
      return outcome.status;
    }
    if (verify->parsed()) {
      const cli::Outcome outcome = cli::verify_command(out_dir);
      report(outcome, quiet, "verify");
      return outcome.status;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  }
  return cli::kExitUsage;
}
