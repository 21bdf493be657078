#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "radns/core.hpp"
#include "radns/exponents.hpp"

using namespace radns::exponents;

namespace {

double oracle_t0(double n, double p, double b, Convention c) {
  const double v = n < (b + 3.0) / 2.0 ? 4.0 / (n * (2.0 * b + 3.0))
                                       : (n - b + 5.0) / (n * (2.0 * b + 3.0));
  return c == Convention::kHolderScaled ? p * v : v;
}

std::array<double, kMaxBranches> oracle_ty2(double n, double b, Convention c) {
  auto T = [&](double p) { return oracle_t0(n, p, b, c); };
  const double d = 2.0 * b + 3.0;
  const double t1 = std::max(T(8.0), 1.0 / d + T(1.0));
  const double uy11 = 2.0 / d + T(1.0);
  return {2.0 / d + T(1.0),
          (2.0 * b + 2.0) / d + T(2.0),
          (b + 1.0) / d + T(1.0) + 0.5,
          (b + 1.0) / d + T(1.0) + uy11 / 2.0,
          1.0 / d + T(4.5),
          T(2.0) + b / d + 3.0 * t1,
          T(1.0) + (b + 2.0) / (2.0 * d) + 1.5 * t1,
          T(5.5) + b / (2.0 * d) + 1.5 * t1};
}

std::array<double, kMaxBranches> oracle_tz2(double n, double b, Convention c) {
  auto T = [&](double p) { return oracle_t0(n, p, b, c); };
  const double d = 2.0 * b + 3.0;
  const double t1 = std::max(T(8.0), 1.0 / d + T(1.0));
  const double uz11 = 0.75 / (1.0 - T(2.5));
  return {0.5 / (1.0 - 1.0 / d - T(0.5)),
          0.5 / (1.0 - (b + 2.0) / (2.0 * d) - T(0.5)),
          uz11 / 2.0 / (1.0 - (b + 1.0) / d - T(1.0)),
          0.375 / (1.0 - (b + 1.0) / d - T(1.75)),
          0.375 / (1.0 - 1.0 / d - T(1.75)),
          0.375 / (1.0 - T(0.75) - t1),
          0.375 / (1.0 - T(1.75) - b / (2.0 * d) - 1.5 * t1),
          0.5 / (1.0 - b / (2.0 * d) - T(4.5))};
}

// Branches whose removal changes the max somewhere on the probe set.
std::array<bool, kMaxBranches> deciding(bool z, Convention c) {
  std::array<bool, kMaxBranches> out{};
  for (const auto& [n, beta] : halton_probes(10'000)) {
    std::array<double, kMaxBranches> br;
    try {
      br = z ? t_z2_branches(n, beta, c) : t_y2_branches(n, beta, c);
    } catch (const PoleError&) {
      continue;
    }
    const double full = *std::max_element(br.begin(), br.end());
    for (std::size_t i = 0; i < kMaxBranches; ++i) {
      double without = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < kMaxBranches; ++k) {
        if (k != i) without = std::max(without, br[k]);
      }
      if (without != full) out[i] = true;
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("exponents") {

TEST_CASE("T0 branches as printed") {
  CHECK(t_y0(10.0, 1.0, 10.0) == doctest::Approx(5.0 / 230.0).epsilon(1e-15));
  CHECK(t_y0(8.5, 1.0, 20.0) == doctest::Approx(4.0 / (8.5 * 43.0)).epsilon(1e-15));
  // The printed form does not depend on p.
  CHECK(t_y0(10.0, 0.25, 10.0) == t_y0(10.0, 7.0, 10.0));
  // On the boundary n = (beta + 3) / 2 the second branch is taken.
  CHECK(t_y0(8.0, 1.0, 13.0) == 0.0);
  CHECK(t_y0(9.0, 1.0, 15.0) == doctest::Approx((9.0 - 15.0 + 5.0) / (9.0 * 33.0)).epsilon(1e-15));
  CHECK_THROWS_AS(t_y0(0.0, 1.0, 10.0), radns::DomainError);
  CHECK_THROWS_AS(t_y0(10.0, 0.0, 10.0), radns::DomainError);
  CHECK_THROWS_AS(t_y0(10.0, 1.0, -1.0), radns::DomainError);
}

TEST_CASE("Hoelder-scaled convention multiplies by p") {
  for (double p : {0.25, 1.0, 2.5, 8.0}) {
    CHECK(t_y0(12.0, p, 9.5, Convention::kHolderScaled) ==
          doctest::Approx(p * t_y0(12.0, p, 9.5)).epsilon(1e-15));
  }
}

TEST_CASE("composed exponents") {
  CHECK(t_y0(9.0, 1.0, 1.0) == doctest::Approx(13.0 / 45.0).epsilon(1e-15));
  CHECK(u_y11(9.0, 1.0) == doctest::Approx(31.0 / 45.0).epsilon(1e-15));
  CHECK(u_y11(9.0, 5.0 / 19.0) == doctest::Approx(1.0).epsilon(1e-14));
  const double n = 11.0, b = 9.7;
  const double s = 1.0 / (2.0 * b + 3.0);
  const double t1 = std::max(t_y0(n, 8.0, b), s + t_y0(n, 1.0, b));
  CHECK(t_y1(n, b) == t1);
  CHECK(u_y2(n, b) == doctest::Approx(2.0 * s + t1).epsilon(1e-15));
  CHECK(u_z11(n, b) == doctest::Approx(0.75 / (1.0 - t_y0(n, 2.5, b))).epsilon(1e-15));
  CHECK(u_z2(n, b) == doctest::Approx(0.75 / (1.0 - t_y0(n, 1.5, b) - t1)).epsilon(1e-15));
}

TEST_CASE("poles are reported") {
  // p (n - beta + 5) / (n (2 beta + 3)) = 1 at n = 10, beta = 1/3, p = 5/2.
  CHECK_THROWS_AS(u_z11(10.0, 1.0 / 3.0, Convention::kHolderScaled), PoleError);
  try {
    (void)u_z11(10.0, 1.0 / 3.0, Convention::kHolderScaled);
  } catch (const PoleError& e) {
    CHECK(e.where() == "U_z11");
  }
}

TEST_CASE("witness at n = 9.5, beta = 10") {
  const ExponentReport r = evaluate(9.5, 10.0);
  CHECK(r.admissible);
  for (double v : r.values) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  CHECK(r.values[0] == t_y2(9.5, 10.0));
  CHECK(r.values[3] == t_z2(9.5, 10.0));
  // Binding thresholds of the closed-form conditions.
  const double n = 9.5;
  CHECK((23 * n + 130) / (n + 26) == doctest::Approx(9.8169).epsilon(1e-4));
  CHECK((47 * n + 310) / (6 * n + 62) == doctest::Approx(6.357).epsilon(1e-3));
  CHECK((7 * n + 50) / (2 * n + 10) == doctest::Approx(4.017).epsilon(1e-3));
  CHECK((35 * n + 190) / (2 * n + 38) == doctest::Approx(9.167).epsilon(1e-3));
  CHECK((7 * n + 40) / (2 * n + 8) == doctest::Approx(3.944).epsilon(1e-3));
  const IffReport iff = verify_appendix_iff(9.5, 10.0);
  CHECK(iff.all_agree());
  for (bool c : iff.closed_form) CHECK(c);
}

TEST_CASE("sub-unit powers are flagged") {
  const ExponentReport r = evaluate(9.5, 10.0);
  REQUIRE_FALSE(r.sub_unit_p.empty());
  for (double p : r.sub_unit_p) CHECK(p < 1.0);
  CHECK(std::find(r.sub_unit_p.begin(), r.sub_unit_p.end(), 0.5) != r.sub_unit_p.end());
  CHECK(std::find(r.sub_unit_p.begin(), r.sub_unit_p.end(), 0.75) != r.sub_unit_p.end());
}

TEST_CASE("boundary of U_y11") {
  const IffReport r = verify_appendix_iff(9.0, 5.0 / 19.0);
  CHECK_FALSE(r.direct_verdict[1]);
  CHECK_FALSE(r.closed_form[1]);
  CHECK(r.agree[1]);
}

TEST_CASE("admissible n search") {
  const std::optional<double> n10 = find_admissible_n(10.0);
  REQUIRE(n10);
  CHECK(*n10 > 8.0);
  CHECK(evaluate(*n10, 10.0).admissible);
  const double near = 157.0 / 17.0 + 0.01;
  const std::optional<double> n_near = find_admissible_n(near);
  REQUIRE(n_near);
  CHECK(*n_near > 8.0);
  CHECK(*n_near < 10.0);
  CHECK(evaluate(*n_near, near).admissible);
  if (const std::optional<double> low = find_admissible_n(1.0)) CHECK(evaluate(*low, 1.0).admissible);
}

TEST_CASE("every listed branch is evaluated") {
  for (Convention c : {Convention::kPrinted, Convention::kHolderScaled}) {
    for (const auto& [n, beta] : halton_probes(2000)) {
      std::array<double, kMaxBranches> y, z;
      try {
        y = t_y2_branches(n, beta, c);
        z = t_z2_branches(n, beta, c);
      } catch (const PoleError&) {
        continue;
      }
      const auto yo = oracle_ty2(n, beta, c);
      const auto zo = oracle_tz2(n, beta, c);
      for (std::size_t i = 0; i < kMaxBranches; ++i) {
        CHECK(y[i] == doctest::Approx(yo[i]).epsilon(1e-12));
        CHECK(z[i] == doctest::Approx(zo[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("branches that decide the max on the probe set") {
  using B = std::array<bool, kMaxBranches>;
  CHECK(deciding(false, Convention::kPrinted) == B{false, false, true, false, false, true, false, false});
  CHECK(deciding(true, Convention::kPrinted) == B{false, false, true, true, false, true, true, false});
  CHECK(deciding(false, Convention::kHolderScaled) == B{false, true, true, false, false, true, false, false});
  CHECK(deciding(true, Convention::kHolderScaled) == B{false, true, true, true, true, true, true, true});
  // The first T_y2 branch is below the third for every beta > 0, so dropping
  // it can never change the value.
  for (const auto& [n, beta] : halton_probes(2000)) {
    for (Convention c : {Convention::kPrinted, Convention::kHolderScaled}) {
      const auto y = t_y2_branches(n, beta, c);
      CHECK(y[0] < y[2]);
    }
  }
}

TEST_CASE("halton probes") {
  const auto probes = halton_probes(1000);
  REQUIRE(probes.size() == 1000);
  for (const auto& [n, beta] : probes) {
    CHECK(n > 8.0);
    CHECK(n <= 100.0);
    CHECK(beta > 0.0);
    CHECK(beta <= 50.0);
  }
  CHECK(probes == halton_probes(1000));
}

TEST_CASE("consistency sweep bookkeeping") {
  const SweepReport r = sweep_appendix_iff(2000);
  CHECK(r.probes + r.pole_skips == 2000);
  CHECK(r.all_agree + r.disagreements.size() >= r.probes);
  for (std::size_t k = 0; k < kTargets; ++k) CHECK(r.agree[k] <= r.probes);
  for (const Disagreement& d : r.disagreements) {
    CHECK(d.direct != d.closed_form);
    const IffReport check = verify_appendix_iff(d.n, d.beta);
    CHECK_FALSE(check.agree[d.target]);
  }
  CHECK(r.agreement_rate() == doctest::Approx(static_cast<double>(r.all_agree) / r.probes));
}

}
