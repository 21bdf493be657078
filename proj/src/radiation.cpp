#include "radns/radiation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace radns {

void KernelSpec::validate() const {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("kernel coefficients a and b must be positive");
}

CyclicTridiagonal radiation_operator(FieldView v, const Grid& grid, const Params& params) {
  grid.check(v, "v");
  const std::size_t n = grid.size();
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  const Field v_face = face_average(v, grid);
  CyclicTridiagonal m{Field(n), Field(n), Field(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const double left = inv_h2 / v_face[j];
    const double right = inv_h2 / v_face[grid.next(j)];
    m.sub[j] = -left;
    m.sup[j] = -right;
    m.diag[j] = left + right + params.a * v[j];
  }
  return m;
}

Field radiation_forcing(FieldView theta, const Grid& grid, const Params& params) {
  grid.check(theta, "theta");
  Field theta4(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double t2 = theta[j] * theta[j];
    theta4[j] = t2 * t2;
  }
  Field f = diff_centered(theta4, grid);
  for (double& x : f) x *= -params.b;
  return f;
}

namespace {

double norm_inf(FieldView f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

double scaled_residual(const CyclicTridiagonal& a, FieldView q, FieldView f) {
  const Field aq = a.multiply(q);
  double r = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) r = std::max(r, std::abs(aq[j] - f[j]));
  const double scale = a.norm_inf() * norm_inf(q) + norm_inf(f);
  return scale > 0.0 ? r / scale : 0.0;
}

}  // namespace

double radiation_residual(FieldView q, FieldView v, FieldView theta, const Grid& grid,
                          const Params& params) {
  grid.check(q, "q");
  return scaled_residual(radiation_operator(v, grid, params), q,
                         radiation_forcing(theta, grid, params));
}

RadiationSolve solve_radiation_lagrangian(FieldView v, FieldView theta, const Grid& grid,
                                          const Params& params) {
  grid.check(v, "v");
  grid.check(theta, "theta");
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!(v[j] > 0.0) || !(theta[j] > 0.0)) {
      throw DomainError("radiation solve needs v > 0 and theta > 0 (cell " + std::to_string(j) +
                        ")");
    }
  }
  const CyclicTridiagonal a = radiation_operator(v, grid, params);
  const Field f = radiation_forcing(theta, grid, params);

  RadiationSolve out;
  out.q = solve_cyclic_tridiagonal(a, f);
  out.residual = scaled_residual(a, out.q, f);
  if (!(out.residual <= kRadiationTolerance)) {
    throw std::runtime_error("radiation solve residual " + std::to_string(out.residual) +
                             " exceeds tolerance");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += v[j] * out.q[j];
  out.weighted_sum = grid.h() * s;
  return out;
}

Field solve_radiation_euler_spectral(FieldView theta4, const KernelSpec& kernel) {
  kernel.validate();
  const std::size_t n = theta4.size();
  if (n < Grid::kMinCells) throw ShapeError("spectral solve needs at least 8 samples");
  Spectrum c = dft(theta4);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t k = 0; k < n; ++k) {
    const long m = wavenumber(k, n);
    if (n % 2 == 0 && m == -static_cast<long>(n / 2)) {
      c[k] = 0.0;
      continue;
    }
    const double km = static_cast<double>(m);
    const Complex factor(0.0, -two_pi * kernel.b * km / (two_pi * two_pi * km * km + kernel.a));
    c[k] *= factor;
  }
  const auto values = idft(c);
  Field q(n);
  double scale = 0.0;
  double imag = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    q[j] = values[j].real();
    scale = std::max(scale, std::abs(values[j]));
    imag = std::max(imag, std::abs(values[j].imag()));
  }
  if (imag > 1e-12 * std::max(1.0, scale)) {
    throw std::runtime_error("spectral radiation solve produced a non-real flux");
  }
  return q;
}

double kernel_closed_form(double z, const KernelSpec& kernel) {
  kernel.validate();
  if (!(z >= -0.5 && z <= 0.5)) {
    throw DomainError("kernel argument " + std::to_string(z) + " outside [-1/2, 1/2]");
  }
  const double root = std::sqrt(kernel.a);
  const double half = 0.5 * root * kernel.b;
  // C = sqrt(a) e^sqrt(a) b / (2 (e^sqrt(a) - 1)) = half + tail, where the
  // tail is computed directly so that (half - C) keeps its digits for large a.
  const double tail = half / std::expm1(root);
  const double c = half + tail;
  const double heaviside_neg = z < 0.0 ? 1.0 : (z == 0.0 ? 0.5 : 0.0);
  const double heaviside_pos = z > 0.0 ? 1.0 : (z == 0.0 ? 0.5 : 0.0);
  // half * H - C, rewritten so the H = 1 case is exactly -tail.
  auto coefficient = [&](double heaviside) {
    return heaviside == 1.0 ? -tail : half * heaviside - c;
  };
  return std::exp(-root * z) * coefficient(heaviside_neg) +
         std::exp(root * z) * coefficient(heaviside_pos);
}

double kernel_series(double z, const KernelSpec& kernel, std::size_t truncation) {
  kernel.validate();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double ab = kernel.a * kernel.b;
  // Pair k and -k into a cosine; accumulate smallest terms first.
  double sum = 0.0;
  for (std::size_t k = truncation; k >= 1; --k) {
    const double kd = static_cast<double>(k);
    sum += -2.0 * ab / (two_pi * two_pi * kd * kd + kernel.a) * std::cos(two_pi * kd * z);
  }
  return sum - kernel.b;
}

KernelCertificate certify_kernel_nonpositive(const KernelSpec& kernel, std::size_t sample_count) {
  kernel.validate();
  if (sample_count < 1000) throw std::invalid_argument("kernel certification needs >= 1000 samples");
  KernelCertificate cert;
  cert.max_value = -std::numeric_limits<double>::infinity();
  auto probe = [&](double z) {
    const double k = kernel_closed_form(z, kernel);
    ++cert.samples;
    if (k > cert.max_value) {
      cert.max_value = k;
      cert.argmax = z;
    }
  };
  for (std::size_t i = 0; i <= sample_count; ++i) {
    probe(-0.5 + static_cast<double>(i) / static_cast<double>(sample_count));
  }
  probe(0.0);
  probe(std::nextafter(0.0, 1.0));
  probe(std::nextafter(0.0, -1.0));
  cert.pass = cert.max_value <= 1e-12;
  return cert;
}

PointwiseBoundReport check_pointwise_bound(const State& state, const Grid& grid,
                                           const Params& params) {
  grid.check(state.q, "q");
  const Field qx = diff_centered(state.q, grid);
  PointwiseBoundReport r;
  r.max_margin = -std::numeric_limits<double>::infinity();
  double emission_max = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double t2 = state.theta[j] * state.theta[j];
    const double emission = params.b * state.v[j] * t2 * t2;
    emission_max = std::max(emission_max, emission);
    const double margin = qx[j] - emission;
    if (margin > r.max_margin) {
      r.max_margin = margin;
      r.argmax = j;
    }
  }
  r.tolerance = 10.0 * grid.h() * grid.h() * emission_max;
  r.pass = r.max_margin <= r.tolerance;
  return r;
}

Field init_compatible_q(FieldView v0, FieldView theta0, const Grid& grid, const Params& params) {
  return solve_radiation_lagrangian(v0, theta0, grid, params).q;
}

}  // namespace radns
