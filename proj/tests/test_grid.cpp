#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "radns/grid.hpp"

using namespace radns;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_abs_diff(FieldView a, FieldView b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double centred_error(std::size_t n) {
  const Grid g(n);
  const Field d = diff_centered(sample(g, [](double x) { return std::sin(kTwoPi * x); }), g);
  return max_abs_diff(d, sample(g, [](double x) { return kTwoPi * std::cos(kTwoPi * x); }));
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("geometry") {
  const Grid g(8);
  CHECK(g.h() == 0.125);
  CHECK(g.center(0) == -0.4375);
  CHECK(g.center(7) == 0.4375);
  CHECK(g.face(0) == -0.5);
  CHECK(g.next(7) == 0);
  CHECK(g.prev(0) == 7);
  CHECK(quadrature(Field(8, 1.0), g) == 1.0);
  CHECK_THROWS(Grid(7));
}

TEST_CASE("shape errors") {
  const Grid g(16);
  const Field f(15, 1.0);
  CHECK_THROWS_AS(diff_centered(f, g), ShapeError);
  CHECK_THROWS_AS(div_flux(f, g), ShapeError);
  CHECK_THROWS_AS(quadrature(f, g), ShapeError);
}

TEST_CASE("centred difference") {
  const Grid g(64);
  for (double x : diff_centered(Field(64, 3.5), g)) CHECK(x == 0.0);
  CHECK(centred_error(64) < 4.0 * std::pow(kTwoPi, 3) / 6.0 / (64.0 * 64.0));
  const double order = std::log2(centred_error(128) / centred_error(256));
  CHECK(order == doctest::Approx(2.0).epsilon(0.1));
  // The sawtooth x_j has a jump at the seam; the periodic differences still telescope.
  const Field d = diff_centered(g.centers(), g);
  CHECK(std::abs(quadrature(d, g)) < 1e-14);
}

TEST_CASE("flux divergence telescopes") {
  const Grid g(128);
  for (double x : div_flux(Field(128, -2.0), g)) CHECK(x == 0.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  Field flux(128);
  for (double& x : flux) x = d(rng);
  CHECK(std::abs(quadrature(div_flux(flux, g), g)) < 1e-13);
  Field faces(128);
  for (std::size_t i = 0; i < 128; ++i) faces[i] = std::sin(kTwoPi * g.face(i));
  const Field expected = sample(g, [](double x) { return kTwoPi * std::cos(kTwoPi * x); });
  CHECK(max_abs_diff(div_flux(faces, g), expected) < 2e-3);
}

TEST_CASE("centred difference and flux divergence agree to second order") {
  auto gap = [](std::size_t n) {
    const Grid g(n);
    auto f = [](double x) { return std::exp(std::sin(kTwoPi * x)); };
    Field faces(n);
    for (std::size_t i = 0; i < n; ++i) faces[i] = f(g.face(i));
    return max_abs_diff(diff_centered(sample(g, f), g), div_flux(faces, g));
  };
  CHECK(std::log2(gap(64) / gap(128)) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(gap(128) / gap(256)) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("midpoint quadrature") {
  const Grid g32(32), g64(64);
  CHECK(std::abs(quadrature(sample(g32, [](double x) { return std::sin(kTwoPi * x); }), g32)) < 1e-15);
  CHECK(quadrature(sample(g64, [](double x) { return 2.0 + std::cos(kTwoPi * x); }), g64) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("cyclic tridiagonal solve") {
  const std::size_t n = 64;
  CyclicTridiagonal id{Field(n, 0.0), Field(n, 1.0), Field(n, 0.0)};
  const Field rhs = sample(Grid(n), [](double x) { return std::cos(3.0 * x) + x; });
  CHECK(max_abs_diff(solve_cyclic_tridiagonal(id, rhs), rhs) == 0.0);

  const double h = 1.0 / static_cast<double>(n);
  CyclicTridiagonal shifted{Field(n, -1.0), Field(n, 2.0 + h * h), Field(n, -1.0)};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Field x(n);
  for (double& v : x) v = d(rng);
  CHECK(max_abs_diff(solve_cyclic_tridiagonal(shifted, shifted.multiply(x)), x) < 1e-10);

  CyclicTridiagonal laplacian{Field(n, -1.0), Field(n, 2.0), Field(n, -1.0)};
  CHECK_THROWS_AS(solve_cyclic_tridiagonal(laplacian, rhs), SingularMatrixError);
}

TEST_CASE("cyclic solve meets the scaled residual bound on random diagonally dominant systems") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (std::size_t n : {8, 33, 200}) {
    CyclicTridiagonal m{Field(n), Field(n), Field(n)};
    Field rhs(n);
    for (std::size_t j = 0; j < n; ++j) {
      m.sub[j] = d(rng);
      m.sup[j] = d(rng);
      m.diag[j] = 2.5 + d(rng);
      rhs[j] = d(rng);
    }
    const Field x = solve_cyclic_tridiagonal(m, rhs);
    const Field ax = m.multiply(x);
    double res = 0.0, xn = 0.0, bn = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      res = std::max(res, std::abs(ax[j] - rhs[j]));
      xn = std::max(xn, std::abs(x[j]));
      bn = std::max(bn, std::abs(rhs[j]));
    }
    CHECK(res <= 1e-10 * (m.norm_inf() * xn + bn));
  }
}

TEST_CASE("discrete Fourier transform") {
  const std::size_t n = 32;
  const Grid g(n);
  const Spectrum c = dft(Field(n, 2.5));
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = wavenumber(k, n) == 0 ? 2.5 : 0.0;
    CHECK(std::abs(c[k] - Complex(expected, 0.0)) < 1e-14);
  }
  const Spectrum cc = dft(sample(g, [](double x) { return std::cos(kTwoPi * x); }));
  for (std::size_t k = 0; k < n; ++k) {
    const long m = wavenumber(k, n);
    const double expected = (m == 1 || m == -1) ? 0.5 : 0.0;
    CHECK(std::abs(cc[k] - Complex(expected, 0.0)) < 1e-14);
  }
}

TEST_CASE("dft round trip") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> d;
  for (std::size_t n : {16, 100, 512}) {
    Field f(n);
    for (double& x : f) x = d(rng);
    const std::vector<Complex> back = idft(dft(f));
    double err = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      err = std::max(err, std::abs(back[j] - Complex(f[j], 0.0)));
      scale = std::max(scale, std::abs(f[j]));
    }
    CHECK(err <= 1e-12 * scale);
  }
}

}
