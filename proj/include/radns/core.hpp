#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace radns {

using Field = std::vector<double>;
using FieldView = std::span<const double>;

/// Raised when an argument lies outside the domain of a constitutive law
/// or other pointwise relation (e.g. a nonpositive volume or temperature).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Physical constants of the viscous, heat-conducting, radiating gas.
///
/// All values are dimensionless. The defaults put the conductivity exponent
/// inside the regime where global large solutions are known to exist.
struct Params {
  double mu = 1.0;      // viscosity
  double kappa1 = 1.0;  // constant part of the conductivity
  double kappa2 = 1.0;  // coefficient of v * theta^beta
  double beta = 10.0;   // conductivity exponent
  double R = 1.0;       // gas constant
  double gamma = 5.0 / 3.0;
  double a = 1.0;  // absorption coefficient
  double b = 1.0;  // Stefan-Boltzmann constant

  /// Specific heat at constant volume, R / (gamma - 1).
  double cv() const { return R / (gamma - 1.0); }

  /// Throws DomainError naming the first offending field.
  void validate() const;
};

/// Fields (v, u, theta, q) on the cell centres at a single time level.
struct State {
  double t = 0.0;
  Field v;
  Field u;
  Field theta;
  Field q;

  std::size_t size() const { return v.size(); }

  /// Checks equal lengths, the expected cell count, and v > 0, theta > 0.
  void validate(std::size_t n_cells) const;

  bool operator==(const State&) const = default;
};

/// Uniform state (v, u, theta) with q = 0 on n cells.
State constant_state(std::size_t n_cells, double v, double u, double theta);

// Ideal polytropic gas in Lagrangian variables.
double pressure(double v, double theta, const Params& params);
double internal_energy(double theta, const Params& params);

/// kappa(v, theta) = kappa1 + kappa2 * v * theta^beta.
double conductivity(double v, double theta, const Params& params);

/// Normalized entropy around (1, 0, 1):
/// u^2/2 + R (v - ln v - 1) + cv (theta - ln theta - 1).
double entropy_density(double v, double u, double theta, const Params& params);

}  // namespace radns
