#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "radns/core.hpp"
#include "radns/grid.hpp"
#include "radns/integrator.hpp"

namespace radns {

/// A configuration problem, located by file line (0 if not line-specific)
/// and dotted key path ("physics.mu").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::string key = {}, std::size_t line = 0);
  const std::string& key() const { return key_; }
  std::size_t line() const { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

struct InitialSpec {
  std::string preset = "single_mode";  // equilibrium, single_mode, two_mode, random_smooth, table
  double alpha_v = 0.1;
  double alpha_u = 0.1;
  double alpha_theta = 0.1;
  // k = 2 amplitudes used by two_mode on top of the single-mode ones.
  double alpha2_v = 0.05;
  double alpha2_u = 0.05;
  double alpha2_theta = 0.05;
  double amplitude = 0.1;  // random_smooth
  std::uint64_t seed = 1;
  std::string table;  // CSV with columns x,v,u,theta at the cell centres
};

struct AuditSettings {
  bool entropy = true;
  bool representation = true;
  bool pointwise = true;
  bool aux = true;
  bool exponents = false;
  double entropy_tol = 1e-2;
  double representation_tol = 1e-2;
};

struct RunConfig {
  Params params;
  std::size_t n_cells = 128;
  double t_end = 0.5;
  StepControl control;
  std::size_t max_steps = 50'000'000;
  InitialSpec initial;
  std::size_t cadence = 1;
  std::string output_dir = "out";
  std::size_t checkpoint_interval = 0;  // accepted steps between checkpoints, 0 = never
  bool write_snapshots = true;
  AuditSettings audits;
  std::filesystem::path base_dir;  // relative table paths resolve against this

  /// Checks every invariant, including positivity of the initial data.
  void validate() const;
};

/// Parses an INI-style file with sections [physics], [grid], [time],
/// [initial], [output] and [audits]. Unknown keys and sections are errors.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>",
                            const std::filesystem::path& base_dir = {});

/// The fully resolved configuration as JSON (every default spelled out).
nlohmann::ordered_json config_to_json(const RunConfig& config);

/// The resolved configuration in the INI format parse_config_text reads,
/// floats to 17 significant digits and the table path made absolute.
std::string config_to_ini(const RunConfig& config);

/// FNV-1a hash of everything that determines the trajectory and its
/// snapshot stream: physics, grid, step control, initial data and cadence.
/// t_end, the output location, checkpointing and audit settings are left out
/// so a run can be resumed with a later end time or elsewhere.
std::uint64_t config_hash(const RunConfig& config);

/// Builds the initial state for the configured preset, renormalises v0 so
/// that h sum v0 = 1 and solves for the compatible q0. Throws ConfigError
/// naming the amplitude key when v0 or theta0 is not strictly positive.
State make_initial_data(const InitialSpec& spec, const Grid& grid, const Params& params,
                        const std::filesystem::path& base_dir = {});

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace radns
