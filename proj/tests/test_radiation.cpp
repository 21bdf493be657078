#include <cmath>
#include <numbers>

#include "doctest.h"
#include "radns/radiation.hpp"

using namespace radns;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// q = c sin 2 pi x solves -q'' + q + (2 + cos 2 pi x)' = 0 when
// c (4 pi^2 + 1) = 2 pi.
const double kAmplitude = kTwoPi / (4.0 * kPi * kPi + 1.0);

Field theta_from_fourth(const Grid& g) {
  return sample(g, [](double x) { return std::pow(2.0 + std::cos(kTwoPi * x), 0.25); });
}

double analytic_error(std::size_t n) {
  const Grid g(n);
  const RadiationSolve s = solve_radiation_lagrangian(Field(n, 1.0), theta_from_fourth(g), g, Params{});
  double e = 0.0;
  for (std::size_t j = 0; j < n; ++j) e = std::max(e, std::abs(s.q[j] - kAmplitude * std::sin(kTwoPi * g.center(j))));
  return e;
}

double oracle_gap(std::size_t n) {
  const Grid g(n);
  const Field theta = theta_from_fourth(g);
  Field theta4(n);
  for (std::size_t j = 0; j < n; ++j) theta4[j] = std::pow(theta[j], 4);
  const Field lag = solve_radiation_lagrangian(Field(n, 1.0), theta, g, Params{}).q;
  const Field spec = solve_radiation_euler_spectral(theta4, KernelSpec{});
  double e = 0.0;
  for (std::size_t j = 0; j < n; ++j) e = std::max(e, std::abs(lag[j] - spec[j]));
  return e;
}

}  // namespace

TEST_SUITE("radiation") {

TEST_CASE("constant temperature gives zero flux") {
  const Grid g(32);
  const Field v = sample(g, [](double x) { return 1.0 + 0.3 * std::sin(kTwoPi * x); });
  const RadiationSolve s = solve_radiation_lagrangian(v, Field(32, 1.7), g, Params{});
  for (double q : s.q) CHECK(q == 0.0);
  CHECK(s.residual == 0.0);
}

TEST_CASE("single-mode analytic solution, second order") {
  CHECK(kAmplitude == doctest::Approx(0.15522).epsilon(1e-4));
  const double e64 = analytic_error(64), e128 = analytic_error(128), e256 = analytic_error(256);
  CHECK(e64 < 1e-3);
  CHECK(std::log2(e64 / e128) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(e128 / e256) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("Lagrangian solve agrees with the spectral oracle at second order") {
  const double g64 = oracle_gap(64), g128 = oracle_gap(128), g256 = oracle_gap(256);
  CHECK(std::log2(g64 / g128) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(g128 / g256) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("solve residual and weighted neutrality") {
  const Grid g(128);
  const Field v = sample(g, [](double x) { return 1.0 + 0.2 * std::sin(kTwoPi * x) + 0.05 * std::cos(3 * kTwoPi * x); });
  const Field theta = sample(g, [](double x) { return 1.0 + 0.3 * std::cos(kTwoPi * x); });
  const RadiationSolve s = solve_radiation_lagrangian(v, theta, g, Params{});
  CHECK(s.residual <= kRadiationTolerance);
  CHECK(radiation_residual(s.q, v, theta, g, Params{}) <= kRadiationTolerance);
  double weighted = 0.0;
  for (std::size_t j = 0; j < 128; ++j) weighted += v[j] * s.q[j];
  CHECK(std::abs(g.h() * weighted) < 1e-12);
  CHECK(s.weighted_sum == doctest::Approx(g.h() * weighted).epsilon(1e-9));
}

TEST_CASE("adding a constant to theta^4 leaves q unchanged") {
  const Grid g(64);
  const Field v = sample(g, [](double x) { return 1.0 + 0.2 * std::sin(kTwoPi * x); });
  Field t1(64), t2(64);
  for (std::size_t j = 0; j < 64; ++j) {
    const double f = 1.0 + 0.5 * std::cos(kTwoPi * g.center(j));
    t1[j] = std::pow(f, 0.25);
    t2[j] = std::pow(f + 3.0, 0.25);
  }
  const Field q1 = solve_radiation_lagrangian(v, t1, g, Params{}).q;
  const Field q2 = solve_radiation_lagrangian(v, t2, g, Params{}).q;
  for (std::size_t j = 0; j < 64; ++j) CHECK(q1[j] == doctest::Approx(q2[j]).epsilon(1e-11));
}

TEST_CASE("spectral oracle single modes") {
  const std::size_t n = 64;
  const Grid g(n);
  CHECK(std::abs(solve_radiation_euler_spectral(Field(n, 4.0), KernelSpec{})[5]) < 1e-15);
  const Field f1 = sample(g, [](double x) { return 2.0 + std::cos(kTwoPi * x); });
  const Field q1 = solve_radiation_euler_spectral(f1, KernelSpec{});
  const Field f2 = sample(g, [](double x) { return std::cos(2.0 * kTwoPi * x); });
  const Field q2 = solve_radiation_euler_spectral(f2, KernelSpec{1.0, 2.0});
  const double c2 = 8.0 * kPi / (16.0 * kPi * kPi + 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    CHECK(q1[j] == doctest::Approx(kAmplitude * std::sin(kTwoPi * g.center(j))).epsilon(1e-12).scale(1.0));
    CHECK(q2[j] == doctest::Approx(c2 * std::sin(2.0 * kTwoPi * g.center(j))).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("kernel spot values") {
  const KernelSpec k;
  const double e = std::numbers::e;
  CHECK(kernel_closed_form(0.0, k) == doctest::Approx(0.5 - e / (e - 1.0)).epsilon(1e-14));
  CHECK(kernel_closed_form(0.0, k) == doctest::Approx(-1.08198).epsilon(1e-5));
  CHECK(kernel_closed_form(0.5, k) == doctest::Approx(-0.95960).epsilon(1e-4));
  CHECK(std::abs(kernel_series(0.5, k, 100'000) - kernel_closed_form(0.5, k)) < 1e-4);
  CHECK(std::abs(kernel_series(0.5, k, 100'000) - (-0.95960)) < 1e-4);
  CHECK_THROWS_AS(kernel_closed_form(0.6, k), DomainError);
}

TEST_CASE("kernel integrates to -b") {
  for (const KernelSpec k : {KernelSpec{1.0, 1.0}, KernelSpec{4.0, 0.3}}) {
    const std::size_t n = 20'000;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += kernel_closed_form(-0.5 + (i + 0.5) / n, k);
    CHECK(sum / n == doctest::Approx(-k.b).epsilon(1e-6));
  }
}

TEST_CASE("kernel series") {
  const KernelSpec k;
  CHECK(kernel_series(0.3, k, 0) == -1.0);
  for (std::size_t m : {1, 17, 1000}) CHECK(kernel_series(0.25, k, m) == kernel_series(-0.25, k, m));
  // O(1/M) convergence away from the jump.
  const double d1 = std::abs(kernel_series(0.2, k, 1000) - kernel_closed_form(0.2, k));
  const double d2 = std::abs(kernel_series(0.2, k, 8000) - kernel_closed_form(0.2, k));
  CHECK(d1 < 1e-3);
  CHECK(d2 < d1);
}

TEST_CASE("kernel is nonpositive") {
  const KernelCertificate c = certify_kernel_nonpositive(KernelSpec{}, 10'000);
  CHECK(c.pass);
  CHECK(c.max_value == doctest::Approx(kernel_closed_form(0.5, KernelSpec{})).epsilon(1e-12));
  CHECK(certify_kernel_nonpositive(KernelSpec{100.0, 1.0}, 10'000).pass);
  CHECK(certify_kernel_nonpositive(KernelSpec{0.01, 5.0}, 10'000).pass);
  CHECK_THROWS(certify_kernel_nonpositive(KernelSpec{}, 10));
}

TEST_CASE("pointwise flux bound") {
  const Grid g(64);
  const Params p;
  State flat = constant_state(64, 1.0, 0.0, 1.2);
  flat.v = sample(g, [](double x) { return 1.0 + 0.1 * std::sin(kTwoPi * x); });
  flat.q = init_compatible_q(flat.v, flat.theta, g, p);
  const PointwiseBoundReport r = check_pointwise_bound(flat, g, p);
  double min_vt4 = 1e300;
  for (double v : flat.v) min_vt4 = std::min(min_vt4, v * std::pow(1.2, 4));
  CHECK(r.max_margin == doctest::Approx(-p.b * min_vt4).epsilon(1e-14));
  CHECK(r.pass);

  const std::size_t n = 256;
  const Grid fine(n);
  State s = constant_state(n, 1.0, 0.0, 1.0);
  s.theta = theta_from_fourth(fine);
  s.q = init_compatible_q(s.v, s.theta, fine, p);
  const PointwiseBoundReport m = check_pointwise_bound(s, fine, p);
  double expected = -1e300;
  for (std::size_t j = 0; j < n; ++j) {
    expected = std::max(expected, -std::cos(kTwoPi * fine.center(j)) / (4.0 * kPi * kPi + 1.0) - 2.0);
  }
  CHECK(m.max_margin == doctest::Approx(expected).epsilon(1e-3));
  CHECK(m.pass);
}

TEST_CASE("compatible initial flux") {
  const Grid g(64);
  const Params p;
  for (double q : init_compatible_q(Field(64, 1.0), Field(64, 1.0), g, p)) CHECK(q == 0.0);
  const Field v = sample(g, [](double x) { return 1.0 + 0.25 * std::sin(kTwoPi * x); });
  const Field theta = sample(g, [](double x) { return 1.0 + 0.2 * std::cos(2 * kTwoPi * x); });
  const Field q = init_compatible_q(v, theta, g, p);
  CHECK(q == solve_radiation_lagrangian(v, theta, g, p).q);
  CHECK(radiation_residual(q, v, theta, g, p) <= 1e-10);
}

}
