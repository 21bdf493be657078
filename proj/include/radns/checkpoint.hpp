#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "radns/core.hpp"
#include "radns/integrator.hpp"

namespace radns {

/// Unreadable, truncated, corrupted or mismatched checkpoint or snapshot file.
class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary layout (little endian):
///   16-byte magic "RADNS-CHECKPOINT", u32 version, u64 n_cells, f64 time,
///   f64[n] v, u, theta, q, u64 config hash,
///   u64 step index, u64 snapshot count, u64 rejected steps,
///   u64 csv bytes, u64 snapshot-file bytes, u64 k, f64[k] auditor state,
///   u64 FNV-1a checksum of every preceding byte.
struct Checkpoint {
  State state;
  std::uint64_t config_hash = 0;
  std::uint64_t step_index = 0;
  std::uint64_t snapshot_count = 0;
  std::uint64_t rejected_steps = 0;
  std::uint64_t csv_bytes = 0;
  std::uint64_t snapshot_bytes = 0;
  std::vector<double> auditor;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Writes to a temporary file and renames it into place.
void checkpoint_save(const Checkpoint& checkpoint, const std::filesystem::path& path);
void checkpoint_save(const State& state, const std::filesystem::path& path,
                     std::uint64_t config_hash = 0);

Checkpoint checkpoint_load(const std::filesystem::path& path);

/// Loads and refuses (CheckpointError) if the stored config hash differs.
Checkpoint checkpoint_load(const std::filesystem::path& path, std::uint64_t expected_hash);

/// Snapshot stream: 16-byte magic "RADNS-SNAPSHOTS", u32 version, u64
/// n_cells, then per snapshot f64 t, u64 step index and f64[n] v, u, theta,
/// q, theta_t.
class SnapshotWriter {
 public:
  /// Creates the file, or with keep_bytes > 0 truncates an existing one to
  /// that length and appends.
  SnapshotWriter(const std::filesystem::path& path, std::size_t n_cells,
                 std::uint64_t keep_bytes = 0);
  void write(const Snapshot& snapshot);
  std::uint64_t bytes() const { return bytes_; }

 private:
  std::ofstream out_;
  std::size_t n_;
  std::uint64_t bytes_ = 0;
};

std::vector<Snapshot> read_snapshots(const std::filesystem::path& path);

}  // namespace radns
