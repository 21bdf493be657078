#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "radns/config.hpp"
#include "radns/diagnostics.hpp"

namespace radns::cli {

/// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // an audit, certificate or comparison failed
inline constexpr int kExitSimulationFailed = 2;
inline constexpr int kExitUsage = 3;  // bad configuration, arguments or input files

struct Outcome {
  int status = kExitOk;
  nlohmann::ordered_json summary;
};

/// Header of diagnostics.csv.
const char* diagnostics_header();
/// One diagnostics.csv line (no newline), floats with 17 significant digits.
std::string diagnostics_line(const AuditRow& row);

/// Simulates and audits. Writes into out_dir: diagnostics.csv,
/// snapshots.bin (unless disabled), run_config.json, run_config.ini,
/// summary.json, checkpoints/step_<k>.bin at the configured interval and,
/// when the run cannot finish, failure.json. With a checkpoint the run
/// continues from it, cutting the CSV and snapshot files back to the length
/// recorded in the checkpoint first.
Outcome run_command(const RunConfig& config, const std::filesystem::path& out_dir,
                    const std::optional<std::filesystem::path>& resume = std::nullopt,
                    bool quiet = true);

/// Tabulates K against its series (kernel.csv) and certifies K <= 0 on a
/// log grid of (a, b) (kernel_certificate.json).
Outcome kernel_command(const std::filesystem::path& out_dir, double a = 1.0, double b = 1.0,
                       std::size_t truncation = 100'000, std::size_t points = 1001);

/// Admissible n over a log-spaced beta grid (exponents.csv), consistency of
/// the closed-form conditions on quasi-random probes
/// (exponents_disagreements.csv) and a summary (exponents_summary.json).
Outcome exponents_command(const std::filesystem::path& out_dir, std::size_t beta_count = 200,
                          std::size_t probes = 10'000);

/// Spatial and temporal convergence against the manufactured solution
/// (mms.csv, mms_summary.json).
Outcome mms_command(const std::filesystem::path& out_dir, const Params& params = {});

/// Re-audits snapshots.bin of a finished run directory and compares every
/// row with diagnostics.csv (verify.json).
Outcome verify_command(const std::filesystem::path& run_dir);

/// Writes text to path via a temporary file and rename.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace radns::cli
