#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace radns::exponents {

/// A denominator 1 - (...) vanished.
class PoleError : public std::domain_error {
 public:
  PoleError(const std::string& where, double n, double beta);
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// How the integrability power p enters T0(n, p, beta).
///  kPrinted: exactly the displayed piecewise formula, independent of p.
///  kHolderScaled: the displayed value multiplied by p, the form obtained
///  when the L^p-in-time bound is derived by Hoelder from the p = 1 case.
enum class Convention { kPrinted, kHolderScaled };

const char* to_string(Convention c);

/// T0(n, p, beta). Branch n - (beta+3)/2 < 0 gives 4 / (n (2 beta + 3)),
/// otherwise (n - beta + 5) / (n (2 beta + 3)). Requires n, p, beta > 0.
double t_y0(double n, double p, double beta, Convention c = Convention::kPrinted);

double t_y1(double n, double beta, Convention c = Convention::kPrinted);
double u_y11(double n, double beta, Convention c = Convention::kPrinted);
double u_z11(double n, double beta, Convention c = Convention::kPrinted);
double u_y2(double n, double beta, Convention c = Convention::kPrinted);
double u_z2(double n, double beta, Convention c = Convention::kPrinted);

inline constexpr std::size_t kMaxBranches = 8;
std::array<double, kMaxBranches> t_y2_branches(double n, double beta,
                                               Convention c = Convention::kPrinted);
std::array<double, kMaxBranches> t_z2_branches(double n, double beta,
                                               Convention c = Convention::kPrinted);
double t_y2(double n, double beta, Convention c = Convention::kPrinted);
double t_z2(double n, double beta, Convention c = Convention::kPrinted);

/// The six target exponents, in this order everywhere.
inline constexpr std::size_t kTargets = 6;
inline constexpr std::array<const char*, kTargets> kTargetNames = {
    "T_y2", "U_y11", "U_y2", "T_z2", "U_z11", "U_z2"};

struct ExponentReport {
  double n = 0.0;
  double beta = 0.0;
  Convention convention = Convention::kPrinted;
  std::array<double, kTargets> values{};
  double t_y0_p1 = 0.0;  // T0(n, 1, beta)
  double t_y1 = 0.0;
  /// Powers p < 1 at which T0 was invoked while evaluating the six values.
  std::vector<double> sub_unit_p;
  bool admissible = false;  // every value strictly inside (0, 1)
};

/// Throws PoleError if any sub-expression is singular.
ExponentReport evaluate(double n, double beta, Convention c = Convention::kPrinted);

/// The closed-form characterisations of 0 < value < 1, one per target.
std::array<bool, kTargets> appendix_conditions(double n, double beta);

struct IffReport {
  ExponentReport direct;
  std::array<bool, kTargets> direct_verdict{};
  std::array<bool, kTargets> closed_form{};
  std::array<bool, kTargets> agree{};
  bool all_agree() const;
};

IffReport verify_appendix_iff(double n, double beta, Convention c = Convention::kPrinted);

/// Smallest n in (8, 200] found admissible by a scan (a few probes just
/// above 8, then a 1e-3 grid) with bisection onto each verdict flip.
std::optional<double> find_admissible_n(double beta, Convention c = Convention::kPrinted);

struct Disagreement {
  double n = 0.0;
  double beta = 0.0;
  std::size_t target = 0;
  double value = 0.0;
  bool direct = false;
  bool closed_form = false;
};

struct SweepReport {
  std::size_t probes = 0;        // evaluated points
  std::size_t pole_skips = 0;    // points rejected because of a pole
  std::size_t all_agree = 0;     // points where all six verdicts agree
  std::array<std::size_t, kTargets> agree{};
  std::vector<Disagreement> disagreements;
  double agreement_rate() const;
};

/// Halton(2, 3) points mapped to (8, 100] x (0, 50].
std::vector<std::array<double, 2>> halton_probes(std::size_t count);

SweepReport sweep_appendix_iff(std::size_t count, Convention c = Convention::kPrinted);

}  // namespace radns::exponents
