#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "radns/core.hpp"
#include "radns/grid.hpp"

namespace radns {

/// Time-step policy for the semi-implicit scheme.
struct StepControl {
  double dt_init = 1e-3;
  double dt_min = 1e-9;
  double dt_max = 1e-2;
  double cfl_advective = 0.5;
  int picard_iters = 1;
  double picard_tol = 1e-10;
  double positivity_shrink = 0.5;

  void validate() const;
};

/// Source field s(t, .) sampled on the grid.
using SourceField = std::function<Field(double t, const Grid& grid)>;

/// Manufactured-solution forcing. Unset members contribute nothing.
/// The v source enters at t^n (explicit update); u and theta sources at t^{n+1}.
struct MmsSources {
  SourceField s_v;
  SourceField s_u;
  SourceField s_theta;
  SourceField s_q;  // added to the radiation right-hand side

  bool empty() const { return !s_v && !s_u && !s_theta && !s_q; }
};

/// A step produced a nonpositive v or theta. Carries the offending field so
/// the caller can shrink dt and retry.
class StepRejected : public std::runtime_error {
 public:
  StepRejected(std::string field, std::size_t cell, double value);
  const std::string& field() const { return field_; }
  std::size_t cell() const { return cell_; }
  double value() const { return value_; }

 private:
  std::string field_;
  std::size_t cell_;
  double value_;
};

/// Advances by dt with the sequence v -> u -> theta -> q:
///  (1) v += dt * div_flux(face average of u)
///  (2) implicit viscous solve for u with pressure at (v^{n+1}, theta^n)
///  (3) implicit conduction solve for theta with kappa lagged (optionally
///      Picard-refined), implicit work term, explicit viscous heating and
///      radiative divergence D q^n
///  (4) fresh radiation solve at (v^{n+1}, theta^{n+1}).
/// Throws StepRejected on loss of positivity and SingularMatrixError if a
/// linear system is singular.
State step(const State& state, double dt, const Grid& grid, const Params& params,
           const StepControl& control, const MmsSources* sources = nullptr);

/// Largest dt allowed by the acoustic CFL surrogate, capped at dt_max.
double cfl_step(const State& state, const Grid& grid, const Params& params,
                const StepControl& control);

/// Per-accepted-step record.
struct StepScalars {
  std::size_t index = 0;  // 1-based count of accepted steps
  double t = 0.0;
  double dt = 0.0;
  double min_v = 0.0, max_v = 0.0;
  double min_theta = 0.0, max_theta = 0.0;
  double mass = 0.0, momentum = 0.0, energy = 0.0;
  double theta_t_weighted = 0.0;  // h * sum kappa |theta_t|^2 / v
  std::size_t rejections = 0;     // rejected attempts before this step
};

/// A stored time level: the state plus the backward difference
/// (theta^{n+1} - theta^n) / dt of the step that produced it (zero at t0
/// until a step has been taken).
struct Snapshot {
  State state;
  Field theta_t;
  std::size_t step_index = 0;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<StepScalars> step_scalars;
  std::size_t clipping_events = 0;  // fields are never clipped; stays zero
  std::size_t rejected_steps = 0;
};

/// Scalars of a step record, computed from a state.
StepScalars summarize(const State& state, const Grid& grid, const Params& params);

/// Resumable position of a run. The step size is a function of the state
/// and the step index only, so nothing else is needed to continue.
struct RunCursor {
  std::size_t step_index = 0;
};

struct RunOptions {
  double t_end = 1.0;
  std::size_t cadence = 1;        // snapshot every k accepted steps
  std::size_t max_steps = 50'000'000;
  const MmsSources* sources = nullptr;
  /// Called for each snapshot as it is produced (including the initial one
  /// unless resuming). Returning without throwing continues the run.
  std::function<void(const Snapshot&)> on_snapshot;
  /// Called after every accepted step (and after its snapshot, if any) with
  /// the new cursor, state and step record.
  std::function<void(const RunCursor&, const State&, const StepScalars&)> on_step;
  /// When false, snapshots are only streamed, not kept in the trajectory.
  bool keep_snapshots = true;
  /// When false, per-step records are only passed to on_step.
  bool keep_step_scalars = true;
};

/// The run could not continue (dt underflow or step budget exhausted).
class SimulationFailure : public std::runtime_error {
 public:
  SimulationFailure(const std::string& what, State last_valid, RunCursor cursor);
  const State& last_valid() const { return last_valid_; }
  const RunCursor& cursor() const { return cursor_; }

 private:
  State last_valid_;
  RunCursor cursor_;
};

/// Integrates to t_end with adaptive dt. Rejected steps shrink dt by
/// positivity_shrink; the run fails if dt falls below dt_min. The final
/// step is clipped to land on t_end exactly.
Trajectory run(const State& initial, const Grid& grid, const Params& params,
               const StepControl& control, const RunOptions& options);

/// Continues a run from a saved cursor; the initial snapshot is not re-emitted.
Trajectory resume(const State& state, const RunCursor& cursor, const Grid& grid,
                  const Params& params, const StepControl& control, const RunOptions& options);

}  // namespace radns
