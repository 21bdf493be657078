#pragma once

#include <cstddef>
#include <vector>

#include "radns/core.hpp"
#include "radns/grid.hpp"
#include "radns/integrator.hpp"

namespace radns::mms {

/// Manufactured fields
///   v = 1 + A sin 2 pi x,  u = A sin 2 pi x cos t,  theta = 1 + A cos 2 pi x e^{-t},
/// with q slaved to (v, theta) through the elliptic equation.
struct Manufactured {
  double amplitude = 0.1;

  double v(double x) const;
  double u(double t, double x) const;
  double theta(double t, double x) const;
};

/// q_x of the slaved flux at the cell centres of grid, from two solves on
/// grids refined by odd factors (so the centres coincide) combined by
/// Richardson extrapolation to remove the h^2 term.
Field slaved_flux_gradient(const Manufactured& m, double t, const Grid& grid,
                           const Params& params);

/// Analytic residuals of the manufactured fields; s_q stays empty.
MmsSources make_sources(const Manufactured& m, const Params& params);

/// Exact (v, u, theta) at time t on the grid, with q from the discrete
/// elliptic solve.
State exact_state(const Manufactured& m, double t, const Grid& grid, const Params& params);

/// Max-norm error over v, u and theta.
double max_error(const State& numerical, const State& exact);

struct Level {
  std::size_t n_cells = 0;
  double dt = 0.0;
  std::size_t steps = 0;
  double error = 0.0;
};

struct Study {
  std::vector<Level> levels;
  std::vector<double> orders;  // log2 ratios between consecutive levels
};

/// Fixed-step integration of the forced system from t = 0 to t_end.
State integrate(const Manufactured& m, std::size_t n_cells, double dt, double t_end,
                const Params& params, const StepControl& control);

/// Refine h with dt = dt_factor * h^2, so both errors scale like h^2.
Study spatial_study(const Manufactured& m, const std::vector<std::size_t>& n_cells,
                    double dt_factor, double t_end, const Params& params,
                    const StepControl& control);

/// Refine dt on a fixed grid.
Study temporal_study(const Manufactured& m, std::size_t n_cells, const std::vector<double>& dts,
                     double t_end, const Params& params, const StepControl& control);

}  // namespace radns::mms
