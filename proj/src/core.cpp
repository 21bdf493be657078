#include "radns/core.hpp"

#include <cmath>

namespace radns {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be positive and finite, got " +
                      std::to_string(value));
  }
}

}  // namespace

void Params::validate() const {
  require_positive(mu, "mu");
  require_positive(kappa1, "kappa1");
  require_positive(kappa2, "kappa2");
  require_positive(beta, "beta");
  require_positive(R, "R");
  require_positive(a, "a");
  require_positive(b, "b");
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma must exceed 1, got " + std::to_string(gamma));
  }
}

void State::validate(std::size_t n_cells) const {
  if (v.size() != n_cells || u.size() != n_cells || theta.size() != n_cells ||
      q.size() != n_cells) {
    throw std::invalid_argument("state fields must all have " + std::to_string(n_cells) +
                                " cells");
  }
  for (std::size_t j = 0; j < n_cells; ++j) {
    if (!(v[j] > 0.0)) {
      throw DomainError("specific volume not positive at cell " + std::to_string(j));
    }
    if (!(theta[j] > 0.0)) {
      throw DomainError("temperature not positive at cell " + std::to_string(j));
    }
  }
}

State constant_state(std::size_t n_cells, double v, double u, double theta) {
  State s;
  s.v.assign(n_cells, v);
  s.u.assign(n_cells, u);
  s.theta.assign(n_cells, theta);
  s.q.assign(n_cells, 0.0);
  return s;
}

double pressure(double v, double theta, const Params& params) {
  require_positive(v, "v");
  require_positive(theta, "theta");
  return params.R * theta / v;
}

double internal_energy(double theta, const Params& params) {
  require_positive(theta, "theta");
  return params.cv() * theta;
}

double conductivity(double v, double theta, const Params& params) {
  require_positive(v, "v");
  require_positive(theta, "theta");
  return params.kappa1 + params.kappa2 * v * std::pow(theta, params.beta);
}

double entropy_density(double v, double u, double theta, const Params& params) {
  require_positive(v, "v");
  require_positive(theta, "theta");
  // x - ln x - 1 loses everything to cancellation near x = 1; use the
  // log1p form so the equilibrium minimum is reproduced exactly.
  auto well = [](double x) {
    const double d = x - 1.0;
    return d - std::log1p(d);
  };
  return 0.5 * u * u + params.R * well(v) + params.cv() * well(theta);
}

}  // namespace radns
