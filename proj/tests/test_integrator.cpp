#include <cmath>
#include <numbers>

#include "doctest.h"
#include "radns/integrator.hpp"
#include "radns/mms.hpp"
#include "radns/radiation.hpp"

using namespace radns;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

State smooth_state(const Grid& g, const Params& p, double alpha = 0.1) {
  State s;
  s.v = sample(g, [&](double x) { return 1.0 + alpha * std::sin(kTwoPi * x); });
  s.u = sample(g, [&](double x) { return alpha * std::sin(kTwoPi * x); });
  s.theta = sample(g, [&](double x) { return 1.0 + alpha * std::cos(kTwoPi * x); });
  s.q = init_compatible_q(s.v, s.theta, g, p);
  return s;
}

}  // namespace

TEST_SUITE("integrator") {

TEST_CASE("step control validation") {
  StepControl c;
  CHECK_NOTHROW(c.validate());
  c.dt_min = 1.0;
  CHECK_THROWS(c.validate());
  c = StepControl{};
  c.cfl_advective = 1.5;
  CHECK_THROWS(c.validate());
  c = StepControl{};
  c.positivity_shrink = 1.0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("equilibrium is a fixed point of a step") {
  const Grid g(64);
  const State s = constant_state(64, 1.0, 0.0, 1.0);
  State next = step(s, 0.01, g, Params{}, StepControl{});
  CHECK(next.t == doctest::Approx(0.01));
  for (std::size_t j = 0; j < 64; ++j) {
    CHECK(next.v[j] == s.v[j]);
    CHECK(std::abs(next.u[j]) < 1e-15);
    CHECK(std::abs(next.theta[j] - 1.0) < 1e-13);
    CHECK(std::abs(next.q[j]) < 1e-14);
  }
}

TEST_CASE("one step conserves mass and momentum") {
  const Grid g(128);
  const Params p;
  const State s = smooth_state(g, p);
  const State next = step(s, 1e-3, g, p, StepControl{});
  CHECK(std::abs(quadrature(next.v, g) - quadrature(s.v, g)) <= 1e-13 * quadrature(s.v, g));
  CHECK(std::abs(quadrature(next.u, g) - quadrature(s.u, g)) <= 1e-13);
  CHECK(radiation_residual(next.q, next.v, next.theta, g, p) <= kRadiationTolerance);
}

TEST_CASE("a step that would make v negative is rejected") {
  const Grid g(32);
  State s = constant_state(32, 1.0, 0.0, 1.0);
  s.u = sample(g, [](double x) { return 50.0 * std::sin(kTwoPi * x); });
  try {
    (void)step(s, 0.5, g, Params{}, StepControl{});
    FAIL("expected a rejection");
  } catch (const StepRejected& r) {
    CHECK(r.field() == "v");
    CHECK(r.value() <= 0.0);
  }
}

TEST_CASE("cfl step") {
  const Grid g(64);
  const Params p;
  StepControl c;
  const State s = smooth_state(g, p);
  double speed = 0.0;
  for (std::size_t j = 0; j < 64; ++j) {
    speed = std::max(speed, std::abs(s.u[j]) + std::sqrt(p.gamma * p.R * s.theta[j] / s.v[j]) / s.v[j]);
  }
  CHECK(cfl_step(s, g, p, c) == doctest::Approx(std::min(c.dt_max, c.cfl_advective * g.h() / speed)));
  c.dt_max = 1e-5;
  CHECK(cfl_step(s, g, p, c) == 1e-5);
}

TEST_CASE("equilibrium run") {
  const Grid g(32);
  const State s = constant_state(32, 1.0, 0.0, 1.0);
  RunOptions o;
  o.t_end = 1.0;
  const Trajectory tr = run(s, g, Params{}, StepControl{}, o);
  CHECK(tr.snapshots.back().state.t == 1.0);
  for (const Snapshot& snap : tr.snapshots) {
    for (std::size_t j = 0; j < 32; ++j) {
      CHECK(snap.state.v[j] == 1.0);
      CHECK(std::abs(snap.state.u[j]) < 1e-15);
      CHECK(std::abs(snap.state.theta[j] - 1.0) < 1e-13);
      CHECK(std::abs(snap.state.q[j]) < 1e-14);
    }
  }
  CHECK(tr.clipping_events == 0);
  CHECK(tr.step_scalars.size() + 1 == tr.snapshots.size());
}

TEST_CASE("cadence and exact final time") {
  const Grid g(64);
  const Params p;
  RunOptions o;
  o.t_end = 0.0537;
  o.cadence = 3;
  const Trajectory tr = run(smooth_state(g, p), g, p, StepControl{}, o);
  CHECK(tr.snapshots.back().state.t == 0.0537);
  const std::size_t steps = tr.step_scalars.size();
  CHECK(tr.snapshots.size() == 1 + steps / 3 + (steps % 3 != 0 ? 1 : 0));
  for (std::size_t k = 1; k < tr.snapshots.size(); ++k) {
    CHECK(tr.snapshots[k].state.t > tr.snapshots[k - 1].state.t);
  }
}

TEST_CASE("theta_t is the backward difference of the accepted step") {
  const Grid g(64);
  const Params p;
  RunOptions o;
  o.t_end = 0.01;
  const Trajectory tr = run(smooth_state(g, p), g, p, StepControl{}, o);
  const Snapshot& a = tr.snapshots[1];
  const Snapshot& b = tr.snapshots[2];
  const double dt = tr.step_scalars[1].dt;
  for (std::size_t j = 0; j < 64; ++j) {
    CHECK(b.theta_t[j] == doctest::Approx((b.state.theta[j] - a.state.theta[j]) / dt).epsilon(1e-12));
  }
}

TEST_CASE("dt underflow reports the last valid state") {
  const Grid g(128);
  const Params p;
  StepControl c;
  c.dt_min = 1e-4;
  State s;
  s.v = sample(g, [](double x) { return 1.0 + 0.95 * std::sin(kTwoPi * x); });
  s.u = sample(g, [](double x) { return 2.0 * std::sin(kTwoPi * x); });
  s.theta = Field(128, 1.0);
  s.q = init_compatible_q(s.v, s.theta, g, p);
  RunOptions o;
  o.t_end = 0.5;
  try {
    (void)run(s, g, p, c, o);
    FAIL("expected a failure");
  } catch (const SimulationFailure& f) {
    CHECK(f.last_valid() == s);
    CHECK(f.cursor().step_index == 0);
  }
}

TEST_CASE("step budget") {
  const Grid g(32);
  const Params p;
  RunOptions o;
  o.t_end = 1.0;
  o.max_steps = 5;
  CHECK_THROWS_AS(run(smooth_state(g, p), g, p, StepControl{}, o), SimulationFailure);
}

TEST_CASE("resume continues bit for bit") {
  const Grid g(64);
  const Params p;
  RunOptions o;
  o.t_end = 0.2;
  State mid;
  RunCursor at;
  o.on_step = [&](const RunCursor& c, const State& s, const StepScalars&) {
    if (c.step_index == 17) {
      mid = s;
      at = c;
    }
  };
  const Trajectory full = run(smooth_state(g, p), g, p, StepControl{}, o);
  o.on_step = nullptr;
  const Trajectory rest = resume(mid, at, g, p, StepControl{}, o);
  REQUIRE(rest.snapshots.size() + 18 == full.snapshots.size());
  for (std::size_t k = 0; k < rest.snapshots.size(); ++k) {
    CHECK(rest.snapshots[k].state == full.snapshots[k + 18].state);
    CHECK(rest.snapshots[k].theta_t == full.snapshots[k + 18].theta_t);
  }
}

TEST_CASE("manufactured solution is tracked") {
  const mms::Manufactured m;
  const Params p;
  const double e = mms::max_error(mms::integrate(m, 64, 1e-3, 0.05, p, StepControl{}),
                                  mms::exact_state(m, 0.05, Grid(64), p));
  CHECK(e < 1e-4);
  CHECK_THROWS(mms::integrate(m, 64, 0.03, 0.05, p, StepControl{}));
}

}
