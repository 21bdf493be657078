#include "radns/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "radns/radiation.hpp"

namespace radns {

void StepControl::validate() const {
  if (!(dt_min > 0.0) || !(dt_init > 0.0) || !(dt_max > 0.0)) {
    throw DomainError("time steps must be positive");
  }
  if (!(dt_min <= dt_init && dt_init <= dt_max)) {
    throw DomainError("step control requires dt_min <= dt_init <= dt_max");
  }
  if (!(cfl_advective > 0.0 && cfl_advective <= 1.0)) {
    throw DomainError("cfl_advective must lie in (0, 1]");
  }
  if (picard_iters < 0) throw DomainError("picard_iters must be nonnegative");
  if (!(picard_tol > 0.0)) throw DomainError("picard_tol must be positive");
  if (!(positivity_shrink > 0.0 && positivity_shrink < 1.0)) {
    throw DomainError("positivity_shrink must lie in (0, 1)");
  }
}

StepRejected::StepRejected(std::string field, std::size_t cell, double value)
    : std::runtime_error("step rejected: " + field + " = " + std::to_string(value) +
                         " at cell " + std::to_string(cell)),
      field_(std::move(field)),
      cell_(cell),
      value_(value) {}

SimulationFailure::SimulationFailure(const std::string& what, State last_valid, RunCursor cursor)
    : std::runtime_error(what), last_valid_(std::move(last_valid)), cursor_(cursor) {}

namespace {

void require_positive_field(const Field& f, const char* name) {
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (!(f[j] > 0.0)) throw StepRejected(name, j, f[j]);
  }
}

void add_source(Field& target, const SourceField& source, double t, const Grid& grid,
                double scale) {
  if (!source) return;
  const Field s = source(t, grid);
  grid.check(s, "source");
  for (std::size_t j = 0; j < target.size(); ++j) target[j] += scale * s[j];
}

// Periodic matrix for c * x - dt * D_face[w_face * D_face x] with the given
// face weights; the caller adds any extra diagonal terms.
CyclicTridiagonal diffusion_matrix(double c, double dt, const Field& w_face, const Grid& grid) {
  const std::size_t n = grid.size();
  const double s = dt / (grid.h() * grid.h());
  CyclicTridiagonal m{Field(n), Field(n), Field(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const double left = s * w_face[j];
    const double right = s * w_face[grid.next(j)];
    m.sub[j] = -left;
    m.sup[j] = -right;
    m.diag[j] = c + left + right;
  }
  return m;
}

}  // namespace

State step(const State& state, double dt, const Grid& grid, const Params& params,
           const StepControl& control, const MmsSources* sources) {
  const std::size_t n = grid.size();
  const double cv = params.cv();
  const double t_new = state.t + dt;
  const bool forced = sources != nullptr && !sources->empty();

  State next;
  next.t = t_new;

  // (1) specific volume, explicit and conservative.
  next.v = div_flux(face_average(state.u, grid), grid);
  for (std::size_t j = 0; j < n; ++j) next.v[j] = state.v[j] + dt * next.v[j];
  if (forced) add_source(next.v, sources->s_v, state.t, grid, dt);
  require_positive_field(next.v, "v");

  const Field v_face = face_average(next.v, grid);

  // (2) velocity with implicit viscosity.
  {
    Field p(n);
    for (std::size_t j = 0; j < n; ++j) p[j] = params.R * state.theta[j] / next.v[j];
    const Field dp = diff_centered(p, grid);
    Field rhs(n);
    for (std::size_t j = 0; j < n; ++j) rhs[j] = state.u[j] - dt * dp[j];
    if (forced) add_source(rhs, sources->s_u, t_new, grid, dt);
    Field w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = params.mu / v_face[i];
    next.u = solve_cyclic_tridiagonal(diffusion_matrix(1.0, dt, w, grid), rhs);
  }

  // (3) temperature. Viscous heating is the cell average of the face
  // dissipation mu (D_face u)^2 / v_face, which is exactly what the viscous
  // term removes from the kinetic energy.
  {
    const Field du_face = face_gradient(next.u, grid);
    const Field du = diff_centered(next.u, grid);
    const Field dq = diff_centered(state.q, grid);
    Field dissipation(n);
    for (std::size_t i = 0; i < n; ++i) {
      dissipation[i] = params.mu * du_face[i] * du_face[i] / v_face[i];
    }
    Field rhs(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double heating = 0.5 * (dissipation[j] + dissipation[grid.next(j)]);
      rhs[j] = cv * state.theta[j] + dt * (heating - dq[j]);
    }
    if (forced) add_source(rhs, sources->s_theta, t_new, grid, dt);

    Field iterate = state.theta;
    Field kappa(n);
    Field w(n);
    for (int it = 0;; ++it) {
      for (std::size_t j = 0; j < n; ++j) kappa[j] = conductivity(next.v[j], iterate[j], params);
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.5 * (kappa[grid.prev(i)] + kappa[i]) / v_face[i];
      }
      CyclicTridiagonal m = diffusion_matrix(cv, dt, w, grid);
      for (std::size_t j = 0; j < n; ++j) m.diag[j] += dt * params.R * du[j] / next.v[j];
      Field solved = solve_cyclic_tridiagonal(m, rhs);
      require_positive_field(solved, "theta");
      if (it >= control.picard_iters) {
        next.theta = std::move(solved);
        break;
      }
      double change = 0.0;
      double size = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        change = std::max(change, std::abs(solved[j] - iterate[j]));
        size = std::max(size, std::abs(solved[j]));
      }
      const bool converged = it > 0 && change <= control.picard_tol * size;
      iterate = std::move(solved);
      if (converged) {
        next.theta = std::move(iterate);
        break;
      }
    }
  }

  // (4) radiative flux slaved to the new (v, theta).
  if (forced && sources->s_q) {
    const CyclicTridiagonal a = radiation_operator(next.v, grid, params);
    Field f = radiation_forcing(next.theta, grid, params);
    add_source(f, sources->s_q, t_new, grid, 1.0);
    next.q = solve_cyclic_tridiagonal(a, f);
  } else {
    next.q = solve_radiation_lagrangian(next.v, next.theta, grid, params).q;
  }
  return next;
}

double cfl_step(const State& state, const Grid& grid, const Params& params,
                const StepControl& control) {
  double speed = 0.0;
  for (std::size_t j = 0; j < state.size(); ++j) {
    const double v = state.v[j];
    const double sound = std::sqrt(params.gamma * params.R * state.theta[j] / v) / v;
    speed = std::max(speed, std::abs(state.u[j]) + sound);
  }
  if (!(speed > 0.0)) return control.dt_max;
  return std::min(control.dt_max, control.cfl_advective * grid.h() / speed);
}

StepScalars summarize(const State& state, const Grid& grid, const Params& params) {
  StepScalars s;
  s.t = state.t;
  const auto [vmin, vmax] = std::minmax_element(state.v.begin(), state.v.end());
  const auto [tmin, tmax] = std::minmax_element(state.theta.begin(), state.theta.end());
  s.min_v = *vmin;
  s.max_v = *vmax;
  s.min_theta = *tmin;
  s.max_theta = *tmax;
  double mass = 0.0, momentum = 0.0, energy = 0.0;
  for (std::size_t j = 0; j < state.size(); ++j) {
    mass += state.v[j];
    momentum += state.u[j];
    energy += params.cv() * state.theta[j] + 0.5 * state.u[j] * state.u[j];
  }
  s.mass = grid.h() * mass;
  s.momentum = grid.h() * momentum;
  s.energy = grid.h() * energy;
  return s;
}

namespace {

Trajectory advance(State current, RunCursor cursor, bool emit_initial, const Grid& grid,
                   const Params& params, const StepControl& control,
                   const RunOptions& options) {
  params.validate();
  control.validate();
  current.validate(grid.size());
  if (options.cadence < 1) throw std::invalid_argument("snapshot cadence must be >= 1");
  if (!(options.t_end > current.t)) throw std::invalid_argument("t_end must exceed the start time");

  Trajectory traj;
  auto emit = [&](Snapshot snap) {
    if (options.on_snapshot) options.on_snapshot(snap);
    if (options.keep_snapshots) traj.snapshots.push_back(std::move(snap));
  };
  if (emit_initial) emit(Snapshot{current, Field(grid.size(), 0.0), cursor.step_index});

  std::size_t taken = 0;
  while (current.t < options.t_end) {
    if (taken >= options.max_steps) {
      throw SimulationFailure("step budget exhausted at t = " + std::to_string(current.t),
                              current, cursor);
    }
    const double remaining = options.t_end - current.t;
    const double cfl = cfl_step(current, grid, params, control);
    double dt = cursor.step_index == 0 ? std::min(control.dt_init, cfl) : cfl;
    bool last = false;
    if (remaining <= dt * (1.0 + 1e-9)) {
      dt = remaining;
      last = true;
    }
    if (!last && dt < control.dt_min) {
      throw SimulationFailure("dt underflow: CFL step " + std::to_string(dt) +
                                  " below dt_min at t = " + std::to_string(current.t),
                              current, cursor);
    }

    std::size_t rejections = 0;
    State next;
    for (;;) {
      try {
        next = step(current, dt, grid, params, control, options.sources);
        break;
      } catch (const StepRejected& rejected) {
        ++rejections;
        dt *= control.positivity_shrink;
        last = false;
        if (dt < control.dt_min) {
          throw SimulationFailure(std::string("dt underflow after rejection (") +
                                      rejected.what() + ") at t = " + std::to_string(current.t),
                                  current, cursor);
        }
      }
    }
    if (last) next.t = options.t_end;

    Field theta_t(grid.size());
    double weighted = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      theta_t[j] = (next.theta[j] - current.theta[j]) / dt;
      weighted += conductivity(next.v[j], next.theta[j], params) * theta_t[j] * theta_t[j] /
                  next.v[j];
    }

    ++cursor.step_index;
    ++taken;
    StepScalars scalars = summarize(next, grid, params);
    scalars.index = cursor.step_index;
    scalars.dt = dt;
    scalars.theta_t_weighted = grid.h() * weighted;
    scalars.rejections = rejections;
    traj.rejected_steps += rejections;
    if (options.keep_step_scalars) traj.step_scalars.push_back(scalars);

    current = std::move(next);
    if (cursor.step_index % options.cadence == 0 || current.t >= options.t_end) {
      emit(Snapshot{current, std::move(theta_t), cursor.step_index});
    }
    if (options.on_step) options.on_step(cursor, current, scalars);
  }
  return traj;
}

}  // namespace

Trajectory run(const State& initial, const Grid& grid, const Params& params,
               const StepControl& control, const RunOptions& options) {
  return advance(initial, RunCursor{}, true, grid, params, control, options);
}

Trajectory resume(const State& state, const RunCursor& cursor, const Grid& grid,
                  const Params& params, const StepControl& control, const RunOptions& options) {
  return advance(state, cursor, false, grid, params, control, options);
}

}  // namespace radns
