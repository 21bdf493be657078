#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "radns/core.hpp"
#include "radns/grid.hpp"
#include "radns/integrator.hpp"

namespace radns {

class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConservedQuantities {
  double mass = 0.0;                // h sum v
  double momentum = 0.0;            // h sum u
  double energy = 0.0;              // h sum (cv theta + u^2 / 2)
  double radiation_weighted = 0.0;  // h sum v q
};

ConservedQuantities conserved_quantities(const State& state, const Grid& grid,
                                         const Params& params);

/// Cellwise integrands of the entropy balance, all built from the centred
/// derivative used by the solver.
struct EntropyIntegrands {
  Field viscous;     // mu u_x^2 / (v theta)
  Field conductive;  // kappa theta_x^2 / (v theta^2)
  Field absorption;  // a v q^2 / (4 b theta^5)
  Field gradient;    // q_x^2 / (4 b v theta^5)
  Field cross;       // 5 q theta_x q_x / (4 b v theta^6)
};

EntropyIntegrands entropy_integrands(const State& state, const Grid& grid, const Params& params);

/// First crossing of v = 1 scanning from x = -1/2 (no wrap), by linear
/// interpolation between cell centres. Throws DiagnosticError if none.
double find_anchor(FieldView v, const Grid& grid);

/// Everything the CSV export needs for one snapshot.
struct AuditRow {
  double t = 0.0;
  ConservedQuantities conserved;
  double entropy_residual = 0.0;
  double repr_error = 0.0;          // Y integrated along a(s)
  double repr_error_frozen = 0.0;   // Y integrated at the current anchor a(t)
  double repr_error_printed = 0.0;  // Y with the prefactor v(t,a)/v0(a)
  double X = 0.0;
  double Yfrak = 0.0;
  double Z = 0.0;
  double min_v = 0.0, max_v = 0.0;
  double min_theta = 0.0, max_theta = 0.0;
  double max_pointwise_margin = 0.0;
  double pointwise_tolerance = 0.0;
  double min_dissipation = 0.0;  // smallest cellwise value of the four squares
};

/// Representation-formula ingredients at one snapshot.
///
/// Y = (v0(a) / v(t,a)) exp((1/mu) int_0^t R theta / v ds). The identity is
/// exact when the exponent is integrated at the fixed point a(t) (Y_frozen);
/// Y integrates it along the anchor path a(s). Y_printed uses the reciprocal
/// prefactor v(t,a) / v0(a), which does not satisfy the identity unless
/// v0(a) = 1, and is kept for comparison only.
struct RepresentationSample {
  double anchor = 0.0;  // a(t), v(t, a(t)) = 1
  double v_at_anchor = 0.0;
  Field B;  // B(t, x_j)
  double Y = 0.0;
  double Y_frozen = 0.0;
  double Y_printed = 0.0;
  double error = 0.0;
  double error_frozen = 0.0;
  double error_printed = 0.0;
};

struct ExtremaReport {
  double min_v = 0.0, max_v = 0.0, min_theta = 0.0, max_theta = 0.0;
  double x_min_v = 0.0, x_max_v = 0.0, x_min_theta = 0.0, x_max_theta = 0.0;
  double t_min_v = 0.0, t_max_v = 0.0, t_min_theta = 0.0, t_max_theta = 0.0;
};

/// Online audit over a stream of snapshots. Every time integral uses the
/// trapezoidal rule on the snapshot times, so the result of feeding a
/// trajectory one snapshot at a time is the batch result. The accumulator
/// state can be saved and restored for checkpointing.
class Auditor {
 public:
  Auditor(const Grid& grid, const Params& params, const Snapshot& initial);

  /// Adds the next snapshot (strictly later time) and returns its row.
  const AuditRow& observe(const Snapshot& snapshot);

  const AuditRow& row() const { return row_; }
  const RepresentationSample& representation() const { return repr_; }
  /// False from the first snapshot whose v has no crossing of v = 1.
  bool representation_tracked() const { return repr_valid_; }
  const ExtremaReport& extrema() const { return extrema_; }
  const EntropyIntegrands& integrands() const { return integrands_; }

  /// (t, max_x theta, Yfrak) at every snapshot seen so far.
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& theta_max_series() const { return theta_max_; }
  const std::vector<double>& yfrak_series() const { return yfrak_history_; }

  std::vector<double> save() const;
  static Auditor restore(const Grid& grid, const Params& params, std::span<const double> blob);

 private:
  Auditor(const Grid& grid, const Params& params);
  void evaluate(const Snapshot& snapshot, bool first);

  Grid grid_;
  Params params_;
  Field v0_, u0_;
  double eta0_ = 0.0;
  double t_prev_ = 0.0;

  // Trapezoidal accumulators: (previous integrand, running integral).
  double diss_prev_ = 0.0, diss_int_ = 0.0;
  double rad_prev_ = 0.0, rad_int_ = 0.0;
  double cross_prev_ = 0.0, cross_int_ = 0.0;
  double x_prev_ = 0.0, x_int_ = 0.0;
  bool x_started_ = false;
  double yfrak_ = 0.0, z_ = 0.0;

  double path_prev_ = 0.0, path_int_ = 0.0;
  bool repr_valid_ = true;
  Field g_prev_, g_int_;
  Field ip_prev_, ip_int_;
  Field if_prev_, if_int_;
  Field ir_prev_, ir_int_;

  ExtremaReport extrema_;
  std::vector<double> times_, theta_max_, yfrak_history_;

  AuditRow row_;
  RepresentationSample repr_;
  EntropyIntegrands integrands_;
};

/// Signed residual LHS - RHS of the entropy balance at every snapshot.
std::vector<double> entropy_balance_residual(const Trajectory& trajectory, const Grid& grid,
                                             const Params& params);

struct RepresentationReport {
  std::vector<double> t;
  std::vector<double> error;         // max_x |RHS - v| / v, printed form
  std::vector<double> error_frozen;  // same with the fixed-anchor exponent
  std::vector<double> error_printed;
  std::vector<RepresentationSample> ingredients;
};

RepresentationReport representation_check(const Trajectory& trajectory, const Grid& grid,
                                          const Params& params);

struct AuxSeries {
  std::vector<double> t, X, Yfrak, Z;
};

AuxSeries aux_functionals(const Trajectory& trajectory, const Grid& grid, const Params& params);

/// Trapezoidal integral of (max_x theta)^p over the snapshot times.
double theta_lp_linfty(const Trajectory& trajectory, double p);
double theta_lp_linfty(std::span<const double> times, std::span<const double> theta_max,
                       double p);

ExtremaReport extrema_report(const Trajectory& trajectory, const Grid& grid);

}  // namespace radns
