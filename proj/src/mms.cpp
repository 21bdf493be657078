#include "radns/mms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "radns/radiation.hpp"

namespace radns::mms {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kCoarseRefine = 27;
constexpr std::size_t kFineRefine = 81;

Field flux_gradient_on(const Manufactured& m, double t, const Grid& coarse, std::size_t factor,
                       const Params& params) {
  const Grid fine(coarse.size() * factor);
  const Field v = sample(fine, [&](double x) { return m.v(x); });
  const Field theta = sample(fine, [&](double x) { return m.theta(t, x); });
  const Field qx = diff_centered(solve_radiation_lagrangian(v, theta, fine, params).q, fine);
  Field out(coarse.size());
  for (std::size_t j = 0; j < coarse.size(); ++j) out[j] = qx[factor * j + (factor - 1) / 2];
  return out;
}

}  // namespace

double Manufactured::v(double x) const { return 1.0 + amplitude * std::sin(kTwoPi * x); }

double Manufactured::u(double t, double x) const {
  return amplitude * std::sin(kTwoPi * x) * std::cos(t);
}

double Manufactured::theta(double t, double x) const {
  return 1.0 + amplitude * std::cos(kTwoPi * x) * std::exp(-t);
}

Field slaved_flux_gradient(const Manufactured& m, double t, const Grid& grid,
                           const Params& params) {
  const Field lo = flux_gradient_on(m, t, grid, kCoarseRefine, params);
  const Field hi = flux_gradient_on(m, t, grid, kFineRefine, params);
  constexpr double w_hi = static_cast<double>(kFineRefine * kFineRefine);
  constexpr double w_lo = static_cast<double>(kCoarseRefine * kCoarseRefine);
  Field out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out[j] = (w_hi * hi[j] - w_lo * lo[j]) / (w_hi - w_lo);
  }
  return out;
}

MmsSources make_sources(const Manufactured& m, const Params& params) {
  const double A = m.amplitude;
  const double k = kTwoPi;
  MmsSources s;
  s.s_v = [A, k](double t, const Grid& grid) {
    return sample(grid, [&](double x) { return -A * k * std::cos(k * x) * std::cos(t); });
  };
  s.s_u = [A, k, params](double t, const Grid& grid) {
    return sample(grid, [&](double x) {
      const double sn = std::sin(k * x), cs = std::cos(k * x), e = std::exp(-t);
      const double v = 1.0 + A * sn, vx = A * k * cs;
      const double th = 1.0 + A * cs * e, thx = -A * k * sn * e;
      const double ut = -A * sn * std::sin(t);
      const double ux = A * k * cs * std::cos(t);
      const double uxx = -A * k * k * sn * std::cos(t);
      const double px = params.R * (thx * v - th * vx) / (v * v);
      const double visc = params.mu * (uxx * v - ux * vx) / (v * v);
      return ut + px - visc;
    });
  };
  s.s_theta = [m, A, k, params](double t, const Grid& grid) {
    const Field qx = slaved_flux_gradient(m, t, grid, params);
    Field out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double x = grid.center(j);
      const double sn = std::sin(k * x), cs = std::cos(k * x), e = std::exp(-t);
      const double v = 1.0 + A * sn, vx = A * k * cs;
      const double th = 1.0 + A * cs * e, thx = -A * k * sn * e, thxx = -A * k * k * cs * e;
      const double tht = -A * cs * e;
      const double ux = A * k * cs * std::cos(t);
      const double pb = std::pow(th, params.beta);
      const double kappa = params.kappa1 + params.kappa2 * v * pb;
      const double kappa_x =
          params.kappa2 * (vx * pb + v * params.beta * std::pow(th, params.beta - 1.0) * thx);
      const double conduction = (kappa_x * thx + kappa * thxx) / v - kappa * thx * vx / (v * v);
      out[j] = params.cv() * tht - conduction + qx[j] - params.mu * ux * ux / v +
               params.R * th * ux / v;
    }
    return out;
  };
  return s;
}

State exact_state(const Manufactured& m, double t, const Grid& grid, const Params& params) {
  State s;
  s.t = t;
  s.v = sample(grid, [&](double x) { return m.v(x); });
  s.u = sample(grid, [&](double x) { return m.u(t, x); });
  s.theta = sample(grid, [&](double x) { return m.theta(t, x); });
  s.q = init_compatible_q(s.v, s.theta, grid, params);
  return s;
}

double max_error(const State& numerical, const State& exact) {
  double e = 0.0;
  for (std::size_t j = 0; j < exact.size(); ++j) {
    e = std::max({e, std::abs(numerical.v[j] - exact.v[j]), std::abs(numerical.u[j] - exact.u[j]),
                  std::abs(numerical.theta[j] - exact.theta[j])});
  }
  return e;
}

State integrate(const Manufactured& m, std::size_t n_cells, double dt, double t_end,
                const Params& params, const StepControl& control) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("dt and t_end must be positive");
  const Grid grid(n_cells);
  const MmsSources sources = make_sources(m, params);
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  if (std::abs(static_cast<double>(steps) * dt - t_end) > 1e-9 * t_end) {
    throw std::invalid_argument("t_end must be a whole number of steps");
  }
  State s = exact_state(m, 0.0, grid, params);
  for (std::size_t k = 0; k < steps; ++k) {
    s = step(s, dt, grid, params, control, &sources);
    s.t = static_cast<double>(k + 1) * dt;
  }
  return s;
}

namespace {

// Observed order between consecutive levels; refinement is measured in h
// for spatial studies and in dt for temporal ones.
Study finish(std::vector<Level> levels, bool spatial) {
  Study study;
  study.levels = std::move(levels);
  for (std::size_t i = 1; i < study.levels.size(); ++i) {
    const Level& a = study.levels[i - 1];
    const Level& b = study.levels[i];
    const double ratio = spatial ? static_cast<double>(b.n_cells) / static_cast<double>(a.n_cells)
                                 : a.dt / b.dt;
    study.orders.push_back(std::log(a.error / b.error) / std::log(ratio));
  }
  return study;
}

}  // namespace

Study spatial_study(const Manufactured& m, const std::vector<std::size_t>& n_cells,
                    double dt_factor, double t_end, const Params& params,
                    const StepControl& control) {
  std::vector<Level> levels;
  for (std::size_t n : n_cells) {
    const double h = 1.0 / static_cast<double>(n);
    // Round dt down so that t_end is a whole number of steps.
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / (dt_factor * h * h)));
    const double dt = t_end / static_cast<double>(steps);
    const State s = integrate(m, n, dt, t_end, params, control);
    levels.push_back(Level{n, dt, steps, max_error(s, exact_state(m, t_end, Grid(n), params))});
  }
  return finish(std::move(levels), true);
}

Study temporal_study(const Manufactured& m, std::size_t n_cells, const std::vector<double>& dts,
                     double t_end, const Params& params, const StepControl& control) {
  std::vector<Level> levels;
  for (double dt : dts) {
    const State s = integrate(m, n_cells, dt, t_end, params, control);
    levels.push_back(Level{n_cells, dt, static_cast<std::size_t>(std::llround(t_end / dt)),
                           max_error(s, exact_state(m, t_end, Grid(n_cells), params))});
  }
  return finish(std::move(levels), false);
}

}  // namespace radns::mms
