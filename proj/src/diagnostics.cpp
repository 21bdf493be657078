#include "radns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "radns/radiation.hpp"

namespace radns {

ConservedQuantities conserved_quantities(const State& state, const Grid& grid,
                                         const Params& params) {
  grid.check(state.v, "v");
  ConservedQuantities c;
  double mass = 0.0, momentum = 0.0, energy = 0.0, rad = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    mass += state.v[j];
    momentum += state.u[j];
    energy += params.cv() * state.theta[j] + 0.5 * state.u[j] * state.u[j];
    rad += state.v[j] * state.q[j];
  }
  c.mass = grid.h() * mass;
  c.momentum = grid.h() * momentum;
  c.energy = grid.h() * energy;
  c.radiation_weighted = grid.h() * rad;
  return c;
}

EntropyIntegrands entropy_integrands(const State& state, const Grid& grid, const Params& params) {
  const std::size_t n = grid.size();
  const Field ux = diff_centered(state.u, grid);
  const Field tx = diff_centered(state.theta, grid);
  const Field qx = diff_centered(state.q, grid);
  EntropyIntegrands e{Field(n), Field(n), Field(n), Field(n), Field(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const double v = state.v[j];
    const double th = state.theta[j];
    const double q = state.q[j];
    const double th5 = th * th * th * th * th;
    const double kappa = conductivity(v, th, params);
    e.viscous[j] = params.mu * ux[j] * ux[j] / (v * th);
    e.conductive[j] = kappa * tx[j] * tx[j] / (v * th * th);
    e.absorption[j] = params.a * v * q * q / (4.0 * params.b * th5);
    e.gradient[j] = qx[j] * qx[j] / (4.0 * params.b * v * th5);
    e.cross[j] = 5.0 * q * tx[j] * qx[j] / (4.0 * params.b * v * th5 * th);
  }
  return e;
}

namespace {

struct AnchorCell {
  double a = 0.0;
  std::size_t i = 0;    // a lies in [x_i, x_{i+1}]
  double s = 0.0;       // (a - x_i) / h
  double at(FieldView f) const { return (1.0 - s) * f[i] + s * f[i + 1]; }
};

AnchorCell locate_anchor(FieldView v, const Grid& grid) {
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const double lo = v[j] - 1.0;
    const double hi = v[j + 1] - 1.0;
    if (lo == 0.0) return AnchorCell{grid.center(j), j, 0.0};
    if ((lo < 0.0 && hi > 0.0) || (lo > 0.0 && hi < 0.0)) {
      const double s = lo / (lo - hi);
      return AnchorCell{grid.center(j) + s * grid.h(), j, s};
    }
  }
  const std::size_t last = grid.size() - 1;
  if (v[last] == 1.0) return AnchorCell{grid.center(last), last - 1, 1.0};
  throw DiagnosticError("no crossing of v = 1 away from the periodic seam");
}

double trapezoid(double dt, double a, double b) { return 0.5 * dt * (a + b); }

}  // namespace

double find_anchor(FieldView v, const Grid& grid) {
  grid.check(v, "v");
  return locate_anchor(v, grid).a;
}

Auditor::Auditor(const Grid& grid, const Params& params) : grid_(grid), params_(params) {}

Auditor::Auditor(const Grid& grid, const Params& params, const Snapshot& initial)
    : grid_(grid), params_(params) {
  const State& s = initial.state;
  s.validate(grid.size());
  const std::size_t n = grid.size();
  v0_ = s.v;
  u0_ = s.u;
  t_prev_ = s.t;
  double eta = 0.0;
  for (std::size_t j = 0; j < n; ++j) eta += entropy_density(s.v[j], s.u[j], s.theta[j], params);
  eta0_ = grid.h() * eta;
  g_prev_.assign(n, 0.0);
  g_int_.assign(n, 0.0);
  ip_prev_.assign(n, 0.0);
  ip_int_.assign(n, 0.0);
  if_prev_.assign(n, 0.0);
  if_int_.assign(n, 0.0);
  ir_prev_.assign(n, 0.0);
  ir_int_.assign(n, 0.0);
  extrema_.min_v = extrema_.min_theta = std::numeric_limits<double>::infinity();
  extrema_.max_v = extrema_.max_theta = -std::numeric_limits<double>::infinity();
  evaluate(initial, true);
}

const AuditRow& Auditor::observe(const Snapshot& snapshot) {
  snapshot.state.validate(grid_.size());
  if (!(snapshot.state.t > t_prev_)) {
    throw std::invalid_argument("snapshot times must be strictly increasing");
  }
  evaluate(snapshot, false);
  return row_;
}

void Auditor::evaluate(const Snapshot& snapshot, bool first) {
  const State& s = snapshot.state;
  const std::size_t n = grid_.size();
  const double h = grid_.h();
  const double dt = first ? 0.0 : s.t - t_prev_;
  const Params& p = params_;

  AuditRow row;
  row.t = s.t;
  row.conserved = conserved_quantities(s, grid_, p);

  // Entropy balance.
  integrands_ = entropy_integrands(s, grid_, p);
  double eta = 0.0, diss = 0.0, rad = 0.0, cross = 0.0;
  double min_diss = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    eta += entropy_density(s.v[j], s.u[j], s.theta[j], p);
    diss += integrands_.viscous[j] + integrands_.conductive[j];
    rad += integrands_.absorption[j] + integrands_.gradient[j];
    cross += integrands_.cross[j];
    min_diss = std::min({min_diss, integrands_.viscous[j], integrands_.conductive[j],
                         integrands_.absorption[j], integrands_.gradient[j]});
  }
  diss *= h;
  rad *= h;
  cross *= h;
  if (!first) {
    diss_int_ += trapezoid(dt, diss_prev_, diss);
    rad_int_ += trapezoid(dt, rad_prev_, rad);
    cross_int_ += trapezoid(dt, cross_prev_, cross);
  }
  diss_prev_ = diss;
  rad_prev_ = rad;
  cross_prev_ = cross;
  row.entropy_residual = h * eta + diss_int_ + rad_int_ - eta0_ - cross_int_;
  row.min_dissipation = min_diss;

  // Auxiliary functionals.
  const Field tx = diff_centered(s.theta, grid_);
  const Field uxx = second_difference(s.u, grid_);
  double x_rate = 0.0, yf = 0.0, z = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = s.v[j];
    const double kappa = conductivity(v, s.theta[j], p);
    x_rate += kappa * snapshot.theta_t[j] * snapshot.theta_t[j] / v;
    yf += kappa * kappa * tx[j] * tx[j] / (v * v);
    z += uxx[j] * uxx[j] / (v * v);
  }
  x_rate *= h;
  if (!first) {
    // The initial snapshot carries no theta_t; take the first step's value.
    if (!x_started_) {
      x_prev_ = x_rate;
      x_started_ = true;
    }
    x_int_ += trapezoid(dt, x_prev_, x_rate);
    x_prev_ = x_rate;
  }
  yfrak_ = first ? h * yf : std::max(yfrak_, h * yf);
  z_ = first ? h * z : std::max(z_, h * z);
  row.X = x_int_;
  row.Yfrak = yfrak_;
  row.Z = z_;

  // Representation formula. Once v = 1 has no crossing the identity is no
  // longer tracked and its errors read NaN.
  RepresentationSample rep;
  std::optional<AnchorCell> found;
  if (repr_valid_) {
    try {
      found = locate_anchor(s.v, grid_);
    } catch (const DiagnosticError&) {
      repr_valid_ = false;
    }
  }
  if (!found) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rep.anchor = rep.v_at_anchor = rep.Y = rep.Y_frozen = rep.Y_printed = nan;
    rep.error = rep.error_frozen = rep.error_printed = nan;
  } else {
    const AnchorCell anchor = *found;
    rep.anchor = anchor.a;
    rep.v_at_anchor = anchor.at(s.v);
    {
      Field w(n);
      for (std::size_t j = 0; j < n; ++j) w[j] = s.u[j] - u0_[j];
      Field cumulative(n, 0.0);
      for (std::size_t j = 1; j < n; ++j) {
        cumulative[j] = cumulative[j - 1] + 0.5 * h * (w[j - 1] + w[j]);
      }
      const double w_a = anchor.at(w);
      const double at_a =
          cumulative[anchor.i] + 0.5 * anchor.s * h * (w[anchor.i] + w_a);
      rep.B.resize(n);
      for (std::size_t j = 0; j < n; ++j) rep.B[j] = std::exp(-(cumulative[j] - at_a) / p.mu);
    }
    const double path_rate = p.R * anchor.at(s.theta) / (p.mu * rep.v_at_anchor);
    Field g_rate(n);
    for (std::size_t j = 0; j < n; ++j) g_rate[j] = p.R * s.theta[j] / (p.mu * s.v[j]);
    if (!first) {
      path_int_ += trapezoid(dt, path_prev_, path_rate);
      for (std::size_t j = 0; j < n; ++j) g_int_[j] += trapezoid(dt, g_prev_[j], g_rate[j]);
    }
    path_prev_ = path_rate;
    g_prev_ = g_rate;
    const double v0_a = anchor.at(v0_);
    rep.Y = v0_a / rep.v_at_anchor * std::exp(path_int_);
    rep.Y_frozen = v0_a / rep.v_at_anchor * std::exp(anchor.at(g_int_));
    rep.Y_printed = rep.v_at_anchor / v0_a * std::exp(path_int_);

    // Each variant carries its own running integral of theta B Y / v0.
    auto rhs_error = [&](double y, Field& prev, Field& integral) {
      double err = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double rate = s.theta[j] * rep.B[j] * y / v0_[j];
        if (!first) integral[j] += trapezoid(dt, prev[j], rate);
        prev[j] = rate;
        const double rhs = v0_[j] / (rep.B[j] * y) * (1.0 + p.R / p.mu * integral[j]);
        err = std::max(err, std::abs(rhs - s.v[j]) / s.v[j]);
      }
      return err;
    };
    rep.error = rhs_error(rep.Y, ip_prev_, ip_int_);
    rep.error_frozen = rhs_error(rep.Y_frozen, if_prev_, if_int_);
    rep.error_printed = rhs_error(rep.Y_printed, ir_prev_, ir_int_);
  }
  row.repr_error = rep.error;
  row.repr_error_frozen = rep.error_frozen;
  row.repr_error_printed = rep.error_printed;

  // Pointwise bound and extrema.
  const PointwiseBoundReport pw = check_pointwise_bound(s, grid_, p);
  row.max_pointwise_margin = pw.max_margin;
  row.pointwise_tolerance = pw.tolerance;

  const auto [vmin, vmax] = std::minmax_element(s.v.begin(), s.v.end());
  const auto [tmin, tmax] = std::minmax_element(s.theta.begin(), s.theta.end());
  row.min_v = *vmin;
  row.max_v = *vmax;
  row.min_theta = *tmin;
  row.max_theta = *tmax;
  auto track = [&](double value, std::size_t j, bool lower, double& best, double& x, double& t) {
    if (lower ? value < best : value > best) {
      best = value;
      x = grid_.center(j);
      t = s.t;
    }
  };
  track(*vmin, vmin - s.v.begin(), true, extrema_.min_v, extrema_.x_min_v, extrema_.t_min_v);
  track(*vmax, vmax - s.v.begin(), false, extrema_.max_v, extrema_.x_max_v, extrema_.t_max_v);
  track(*tmin, tmin - s.theta.begin(), true, extrema_.min_theta, extrema_.x_min_theta,
        extrema_.t_min_theta);
  track(*tmax, tmax - s.theta.begin(), false, extrema_.max_theta, extrema_.x_max_theta,
        extrema_.t_max_theta);

  times_.push_back(s.t);
  theta_max_.push_back(*tmax);
  yfrak_history_.push_back(row.Yfrak);
  t_prev_ = s.t;
  row_ = row;
  repr_ = std::move(rep);
}

namespace {

constexpr double kAuditorBlobVersion = 1.0;

class BlobWriter {
 public:
  void put(double x) { data_.push_back(x); }
  void put(const Field& f) {
    put(static_cast<double>(f.size()));
    data_.insert(data_.end(), f.begin(), f.end());
  }
  std::vector<double> take() { return std::move(data_); }

 private:
  std::vector<double> data_;
};

class BlobReader {
 public:
  explicit BlobReader(std::span<const double> data) : data_(data) {}
  double get() {
    if (pos_ >= data_.size()) throw std::invalid_argument("auditor state is truncated");
    return data_[pos_++];
  }
  std::size_t get_size() {
    const double x = get();
    if (!(x >= 0.0) || x != std::floor(x) || x > 1e12) {
      throw std::invalid_argument("auditor state has a corrupt length");
    }
    return static_cast<std::size_t>(x);
  }
  Field get_field() {
    const std::size_t n = get_size();
    if (data_.size() - pos_ < n) throw std::invalid_argument("auditor state is truncated");
    Field f(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
            data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return f;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  std::span<const double> data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<double> Auditor::save() const {
  BlobWriter w;
  w.put(kAuditorBlobVersion);
  w.put(static_cast<double>(grid_.size()));
  for (double x : {eta0_, t_prev_, diss_prev_, diss_int_, rad_prev_, rad_int_, cross_prev_,
                   cross_int_, x_prev_, x_int_, x_started_ ? 1.0 : 0.0, yfrak_, z_, path_prev_,
                   path_int_, repr_valid_ ? 1.0 : 0.0}) {
    w.put(x);
  }
  for (const Field* f : {&v0_, &u0_, &g_prev_, &g_int_, &ip_prev_, &ip_int_, &if_prev_, &if_int_,
                         &ir_prev_, &ir_int_, &times_, &theta_max_, &yfrak_history_}) {
    w.put(*f);
  }
  const ExtremaReport& e = extrema_;
  for (double x : {e.min_v, e.max_v, e.min_theta, e.max_theta, e.x_min_v, e.x_max_v,
                   e.x_min_theta, e.x_max_theta, e.t_min_v, e.t_max_v, e.t_min_theta,
                   e.t_max_theta}) {
    w.put(x);
  }
  const AuditRow& r = row_;
  for (double x : {r.t, r.conserved.mass, r.conserved.momentum, r.conserved.energy,
                   r.conserved.radiation_weighted, r.entropy_residual, r.repr_error,
                   r.repr_error_frozen, r.repr_error_printed, r.X, r.Yfrak, r.Z, r.min_v, r.max_v, r.min_theta,
                   r.max_theta, r.max_pointwise_margin, r.pointwise_tolerance,
                   r.min_dissipation}) {
    w.put(x);
  }
  for (double x : {repr_.anchor, repr_.v_at_anchor, repr_.Y, repr_.Y_frozen, repr_.Y_printed,
                   repr_.error, repr_.error_frozen, repr_.error_printed}) {
    w.put(x);
  }
  w.put(repr_.B);
  return w.take();
}

Auditor Auditor::restore(const Grid& grid, const Params& params, std::span<const double> blob) {
  BlobReader r(blob);
  if (r.get() != kAuditorBlobVersion) throw std::invalid_argument("unknown auditor state version");
  if (r.get_size() != grid.size()) throw ShapeError("auditor state was saved for another grid");
  Auditor a(grid, params);
  for (double* x : {&a.eta0_, &a.t_prev_, &a.diss_prev_, &a.diss_int_, &a.rad_prev_, &a.rad_int_,
                    &a.cross_prev_, &a.cross_int_, &a.x_prev_, &a.x_int_}) {
    *x = r.get();
  }
  a.x_started_ = r.get() != 0.0;
  for (double* x : {&a.yfrak_, &a.z_, &a.path_prev_, &a.path_int_}) *x = r.get();
  a.repr_valid_ = r.get() != 0.0;
  for (Field* f : {&a.v0_, &a.u0_, &a.g_prev_, &a.g_int_, &a.ip_prev_, &a.ip_int_, &a.if_prev_,
                   &a.if_int_, &a.ir_prev_, &a.ir_int_, &a.times_, &a.theta_max_, &a.yfrak_history_}) {
    *f = r.get_field();
  }
  for (const Field* f : {&a.v0_, &a.u0_, &a.g_prev_, &a.g_int_, &a.ip_prev_, &a.ip_int_,
                         &a.if_prev_, &a.if_int_, &a.ir_prev_, &a.ir_int_}) {
    if (f->size() != grid.size()) throw ShapeError("auditor state has a field of the wrong size");
  }
  ExtremaReport& e = a.extrema_;
  for (double* x : {&e.min_v, &e.max_v, &e.min_theta, &e.max_theta, &e.x_min_v, &e.x_max_v,
                    &e.x_min_theta, &e.x_max_theta, &e.t_min_v, &e.t_max_v, &e.t_min_theta,
                    &e.t_max_theta}) {
    *x = r.get();
  }
  AuditRow& w = a.row_;
  for (double* x : {&w.t, &w.conserved.mass, &w.conserved.momentum, &w.conserved.energy,
                    &w.conserved.radiation_weighted, &w.entropy_residual, &w.repr_error,
                    &w.repr_error_frozen, &w.repr_error_printed, &w.X, &w.Yfrak, &w.Z, &w.min_v, &w.max_v,
                    &w.min_theta, &w.max_theta, &w.max_pointwise_margin,
                    &w.pointwise_tolerance, &w.min_dissipation}) {
    *x = r.get();
  }
  for (double* x : {&a.repr_.anchor, &a.repr_.v_at_anchor, &a.repr_.Y, &a.repr_.Y_frozen,
                    &a.repr_.Y_printed, &a.repr_.error, &a.repr_.error_frozen,
                    &a.repr_.error_printed}) {
    *x = r.get();
  }
  a.repr_.B = r.get_field();
  if (!r.done()) throw std::invalid_argument("auditor state has trailing data");
  return a;
}

namespace {

template <typename Visit>
void audit_trajectory(const Trajectory& trajectory, const Grid& grid, const Params& params,
                      Visit&& visit) {
  if (trajectory.snapshots.empty()) throw std::invalid_argument("trajectory has no snapshots");
  Auditor auditor(grid, params, trajectory.snapshots.front());
  visit(auditor);
  for (std::size_t k = 1; k < trajectory.snapshots.size(); ++k) {
    auditor.observe(trajectory.snapshots[k]);
    visit(auditor);
  }
}

}  // namespace

std::vector<double> entropy_balance_residual(const Trajectory& trajectory, const Grid& grid,
                                             const Params& params) {
  if (trajectory.snapshots.size() < 2) {
    throw std::invalid_argument("entropy balance needs at least two snapshots");
  }
  std::vector<double> r;
  audit_trajectory(trajectory, grid, params,
                   [&](const Auditor& a) { r.push_back(a.row().entropy_residual); });
  return r;
}

RepresentationReport representation_check(const Trajectory& trajectory, const Grid& grid,
                                          const Params& params) {
  RepresentationReport out;
  audit_trajectory(trajectory, grid, params, [&](const Auditor& a) {
    out.t.push_back(a.row().t);
    out.error.push_back(a.representation().error);
    out.error_frozen.push_back(a.representation().error_frozen);
    out.error_printed.push_back(a.representation().error_printed);
    out.ingredients.push_back(a.representation());
  });
  return out;
}

AuxSeries aux_functionals(const Trajectory& trajectory, const Grid& grid, const Params& params) {
  AuxSeries out;
  audit_trajectory(trajectory, grid, params, [&](const Auditor& a) {
    out.t.push_back(a.row().t);
    out.X.push_back(a.row().X);
    out.Yfrak.push_back(a.row().Yfrak);
    out.Z.push_back(a.row().Z);
  });
  return out;
}

double theta_lp_linfty(std::span<const double> times, std::span<const double> theta_max,
                       double p) {
  if (!(p >= 1.0)) throw DomainError("theta_lp_linfty needs p >= 1");
  if (times.size() != theta_max.size()) throw ShapeError("time and theta series differ in length");
  double total = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    total += trapezoid(times[k] - times[k - 1], std::pow(theta_max[k - 1], p),
                       std::pow(theta_max[k], p));
  }
  return total;
}

double theta_lp_linfty(const Trajectory& trajectory, double p) {
  std::vector<double> t, m;
  for (const Snapshot& s : trajectory.snapshots) {
    t.push_back(s.state.t);
    m.push_back(*std::max_element(s.state.theta.begin(), s.state.theta.end()));
  }
  return theta_lp_linfty(t, m, p);
}

ExtremaReport extrema_report(const Trajectory& trajectory, const Grid& grid) {
  if (trajectory.snapshots.empty()) throw std::invalid_argument("trajectory has no snapshots");
  ExtremaReport e;
  e.min_v = e.min_theta = std::numeric_limits<double>::infinity();
  e.max_v = e.max_theta = -std::numeric_limits<double>::infinity();
  for (const Snapshot& snap : trajectory.snapshots) {
    const State& s = snap.state;
    grid.check(s.v, "v");
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double x = grid.center(j);
      if (s.v[j] < e.min_v) e.min_v = s.v[j], e.x_min_v = x, e.t_min_v = s.t;
      if (s.v[j] > e.max_v) e.max_v = s.v[j], e.x_max_v = x, e.t_max_v = s.t;
      if (s.theta[j] < e.min_theta) e.min_theta = s.theta[j], e.x_min_theta = x, e.t_min_theta = s.t;
      if (s.theta[j] > e.max_theta) e.max_theta = s.theta[j], e.x_max_theta = x, e.t_max_theta = s.t;
    }
  }
  return e;
}

}  // namespace radns
