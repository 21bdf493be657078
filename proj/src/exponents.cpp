#include "radns/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "radns/core.hpp"

namespace radns::exponents {

namespace {

std::string pole_message(const std::string& where, double n, double beta) {
  std::ostringstream os;
  os.precision(17);
  os << "pole in " << where << " at n = " << n << ", beta = " << beta;
  return os.str();
}

constexpr double kPoleTolerance = 1e-14;

struct Eval {
  double n;
  double beta;
  Convention convention;
  std::vector<double>* p_log = nullptr;

  double s() const { return 1.0 / (2.0 * beta + 3.0); }

  double t0(double p) const {
    if (p_log != nullptr && p < 1.0 &&
        std::find(p_log->begin(), p_log->end(), p) == p_log->end()) {
      p_log->push_back(p);
    }
    const double scale = convention == Convention::kHolderScaled ? p : 1.0;
    const double denom = n * (2.0 * beta + 3.0);
    if (n - (beta + 3.0) / 2.0 < 0.0) return scale * 4.0 / denom;
    return scale * (n - beta + 5.0) / denom;
  }

  double t1() const { return std::max(t0(8.0), s() + t0(1.0)); }

  double reciprocal(double denom, const char* where) const {
    if (std::abs(denom) <= kPoleTolerance) throw PoleError(where, n, beta);
    return 1.0 / denom;
  }

  double uy11() const { return 2.0 * s() + t0(1.0); }
  double uz11() const { return 0.75 * reciprocal(1.0 - t0(2.5), "U_z11"); }
  double uy2() const { return 2.0 * s() + t1(); }
  double uz2() const { return 0.75 * reciprocal(1.0 - t0(1.5) - t1(), "U_z2"); }

  std::array<double, kMaxBranches> ty2() const {
    const double sv = s();
    const double b = beta;
    const double tt1 = t1();
    return {2.0 * sv + t0(1.0),
            (2.0 * b + 2.0) * sv + t0(2.0),
            (b + 1.0) * sv + t0(1.0) + 0.5,
            (b + 1.0) * sv + t0(1.0) + uy11() / 2.0,
            sv + t0(4.5),
            t0(2.0) + b * sv + 3.0 * tt1,
            t0(1.0) + (b + 2.0) / (4.0 * b + 6.0) + 1.5 * tt1,
            t0(5.5) + b / (4.0 * b + 6.0) + 1.5 * tt1};
  }

  std::array<double, kMaxBranches> tz2() const {
    const double sv = s();
    const double b = beta;
    const double tt1 = t1();
    const double q = b / (4.0 * b + 6.0);
    return {0.5 * reciprocal(1.0 - sv - t0(0.5), "T_z2 branch 1"),
            0.5 * reciprocal(1.0 - (b + 2.0) / (4.0 * b + 6.0) - t0(0.5), "T_z2 branch 2"),
            uz11() / 2.0 * reciprocal(1.0 - (b + 1.0) * sv - t0(1.0), "T_z2 branch 3"),
            0.375 * reciprocal(1.0 - (b + 1.0) * sv - t0(1.75), "T_z2 branch 4"),
            0.375 * reciprocal(1.0 - sv - t0(1.75), "T_z2 branch 5"),
            0.375 * reciprocal(1.0 - t0(0.75) - tt1, "T_z2 branch 6"),
            0.375 * reciprocal(1.0 - t0(1.75) - q - 1.5 * tt1, "T_z2 branch 7"),
            0.5 * reciprocal(1.0 - q - t0(4.5), "T_z2 branch 8")};
  }
};

Eval make(double n, double beta, Convention c) {
  if (!(n > 0.0) || !(beta > 0.0) || !std::isfinite(n) || !std::isfinite(beta)) {
    throw DomainError("exponents need n > 0 and beta > 0");
  }
  return Eval{n, beta, c};
}

double max_of(const std::array<double, kMaxBranches>& a) {
  return *std::max_element(a.begin(), a.end());
}

bool inside_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace

PoleError::PoleError(const std::string& where, double n, double beta)
    : std::domain_error(pole_message(where, n, beta)), where_(where) {}

const char* to_string(Convention c) {
  return c == Convention::kPrinted ? "printed" : "holder_scaled";
}

double t_y0(double n, double p, double beta, Convention c) {
  if (!(p > 0.0)) throw DomainError("T0 needs p > 0");
  return make(n, beta, c).t0(p);
}

double t_y1(double n, double beta, Convention c) { return make(n, beta, c).t1(); }
double u_y11(double n, double beta, Convention c) { return make(n, beta, c).uy11(); }
double u_z11(double n, double beta, Convention c) { return make(n, beta, c).uz11(); }
double u_y2(double n, double beta, Convention c) { return make(n, beta, c).uy2(); }
double u_z2(double n, double beta, Convention c) { return make(n, beta, c).uz2(); }

std::array<double, kMaxBranches> t_y2_branches(double n, double beta, Convention c) {
  return make(n, beta, c).ty2();
}

std::array<double, kMaxBranches> t_z2_branches(double n, double beta, Convention c) {
  return make(n, beta, c).tz2();
}

double t_y2(double n, double beta, Convention c) { return max_of(t_y2_branches(n, beta, c)); }
double t_z2(double n, double beta, Convention c) { return max_of(t_z2_branches(n, beta, c)); }

ExponentReport evaluate(double n, double beta, Convention c) {
  ExponentReport r;
  Eval e = make(n, beta, c);
  e.p_log = &r.sub_unit_p;
  r.n = n;
  r.beta = beta;
  r.convention = c;
  r.values = {max_of(e.ty2()), e.uy11(), e.uy2(), max_of(e.tz2()), e.uz11(), e.uz2()};
  r.t_y0_p1 = e.t0(1.0);
  r.t_y1 = e.t1();
  std::sort(r.sub_unit_p.begin(), r.sub_unit_p.end());
  r.admissible = std::all_of(r.values.begin(), r.values.end(), inside_unit);
  return r;
}

std::array<bool, kTargets> appendix_conditions(double n, double b) {
  const double upper = 2.0 * n - 3.0;
  std::array<bool, kTargets> r{};

  if (n <= 10.0) {
    r[0] = (23.0 * n + 130.0) / (n + 26.0) < b && b <= upper;
  } else {
    r[0] = (n + 10.0) / 2.0 < b && b <= upper;
  }

  r[1] = b > 5.0 / (1.0 + 2.0 * n);

  const double uy2_lower = (7.0 * n + 40.0) / (2.0 * n + 8.0);
  const double uy2_split = (11.0 * std::sqrt(33.0) + 69.0) / 8.0;
  if (n <= 16.0) {
    r[2] = uy2_lower < b && b <= upper;
  } else if (n < uy2_split) {
    r[2] = (uy2_lower < b && b <= upper) || b > (48.0 - n) / (2.0 * n - 32.0);
  } else {
    r[2] = b > uy2_lower;
  }

  const double tz2_lower = (47.0 * n + 310.0) / (6.0 * n + 62.0);
  const double tz2_split = (std::sqrt(231145.0) + 499.0) / 24.0;
  if (n <= tz2_split) {
    r[3] = tz2_lower < b && b <= upper;
  } else if (n < 124.0 / 3.0) {
    r[3] = tz2_lower < b && b < (372.0 - 15.0 * n) / (6.0 * n - 248.0);
  } else {
    r[3] = b > tz2_lower;
  }

  const double uz11_lower = (7.0 * n + 50.0) / (2.0 * n + 10.0);
  r[4] = n <= 20.0 ? (uz11_lower < b && b <= upper) : b > uz11_lower;

  const double uz2_lower = (35.0 * n + 190.0) / (2.0 * n + 38.0);
  r[5] = n <= 76.0 ? (uz2_lower < b && b <= upper) : b > uz2_lower;
  return r;
}

bool IffReport::all_agree() const {
  return std::all_of(agree.begin(), agree.end(), [](bool x) { return x; });
}

IffReport verify_appendix_iff(double n, double beta, Convention c) {
  IffReport r;
  r.direct = evaluate(n, beta, c);
  r.closed_form = appendix_conditions(n, beta);
  for (std::size_t k = 0; k < kTargets; ++k) {
    r.direct_verdict[k] = inside_unit(r.direct.values[k]);
    r.agree[k] = r.direct_verdict[k] == r.closed_form[k];
  }
  return r;
}

std::optional<double> find_admissible_n(double beta, Convention c) {
  if (!(beta > 0.0)) throw DomainError("find_admissible_n needs beta > 0");
  auto admissible = [&](double n) {
    try {
      return evaluate(n, beta, c).admissible;
    } catch (const PoleError&) {
      return false;
    }
  };
  // Left of the first admissible probe, bisect down to the verdict flip.
  auto refine = [&](double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi;
         ++it) {
      const double mid = lo + 0.5 * (hi - lo);
      if (admissible(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  };

  double previous = 8.0;
  for (double offset : {1e-9, 1e-7, 1e-6, 1e-5, 1e-4}) {
    const double n = 8.0 + offset;
    if (admissible(n)) return refine(previous, n);
    previous = n;
  }
  constexpr long kSteps = 192'000;
  for (long k = 1; k <= kSteps; ++k) {
    const double n = 8.0 + static_cast<double>(k) * 1e-3;
    if (admissible(n)) return refine(previous, n);
    previous = n;
  }
  return std::nullopt;
}

double SweepReport::agreement_rate() const {
  return probes == 0 ? 0.0 : static_cast<double>(all_agree) / static_cast<double>(probes);
}

namespace {

double radical_inverse(std::size_t index, std::size_t base) {
  double result = 0.0;
  double f = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= static_cast<double>(base);
  }
  return result;
}

}  // namespace

std::vector<std::array<double, 2>> halton_probes(std::size_t count) {
  std::vector<std::array<double, 2>> out;
  out.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    out.push_back({100.0 - 92.0 * radical_inverse(i, 2), 50.0 - 50.0 * radical_inverse(i, 3)});
  }
  return out;
}

SweepReport sweep_appendix_iff(std::size_t count, Convention c) {
  SweepReport report;
  for (const auto& [n, beta] : halton_probes(count)) {
    IffReport r;
    try {
      r = verify_appendix_iff(n, beta, c);
    } catch (const PoleError&) {
      ++report.pole_skips;
      continue;
    }
    ++report.probes;
    if (r.all_agree()) ++report.all_agree;
    for (std::size_t k = 0; k < kTargets; ++k) {
      if (r.agree[k]) {
        ++report.agree[k];
      } else {
        report.disagreements.push_back(
            Disagreement{n, beta, k, r.direct.values[k], r.direct_verdict[k], r.closed_form[k]});
      }
    }
  }
  return report;
}

}  // namespace radns::exponents
