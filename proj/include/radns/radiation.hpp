#pragma once

#include <cstddef>

#include "radns/core.hpp"
#include "radns/grid.hpp"

namespace radns {

/// Coefficients of the torus Green kernel
///   K(z) = sum_k -a b / (4 pi^2 k^2 + a) exp(2 pi i k z).
struct KernelSpec {
  double a = 1.0;
  double b = 1.0;

  void validate() const;
};

/// Bound on the scaled residual every radiation solve must meet.
inline constexpr double kRadiationTolerance = 1e-10;

struct RadiationSolve {
  Field q;
  double residual = 0.0;        // scaled infinity-norm residual
  double weighted_sum = 0.0;    // h * sum_j v_j q_j
};

/// Assembles -D_face[(D_face q) / v_face] + a v q as a periodic tridiagonal
/// matrix, with v at faces by arithmetic averaging.
CyclicTridiagonal radiation_operator(FieldView v, const Grid& grid, const Params& params);

/// Right-hand side -b D_centered(theta^4).
Field radiation_forcing(FieldView theta, const Grid& grid, const Params& params);

/// ||A q - f||_inf / (||A||_inf ||q||_inf + ||f||_inf), zero for the trivial system.
double radiation_residual(FieldView q, FieldView v, FieldView theta, const Grid& grid,
                          const Params& params);

/// Solves -(q_x / v)_x + a v q + b (theta^4)_x = 0 on the Lagrangian grid.
/// Throws SingularMatrixError if the elliptic matrix is singular and
/// std::runtime_error if the residual misses kRadiationTolerance.
RadiationSolve solve_radiation_lagrangian(FieldView v, FieldView theta, const Grid& grid,
                                          const Params& params);

/// Eulerian spectral solve: q^(k) = -2 pi b k i / (4 pi^2 k^2 + a) * (theta^4)^(k).
/// The Nyquist mode (no conjugate partner) is dropped.
Field solve_radiation_euler_spectral(FieldView theta4, const KernelSpec& kernel);

/// Closed form of K on [-1/2, 1/2] with the Heaviside convention H(0) = 1/2.
/// Throws DomainError outside the fundamental domain.
double kernel_closed_form(double z, const KernelSpec& kernel);

/// Symmetric partial sum of the kernel series over |k| <= truncation.
double kernel_series(double z, const KernelSpec& kernel, std::size_t truncation);

struct KernelCertificate {
  double max_value = 0.0;
  double argmax = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

/// Evaluates the closed form on a uniform sample plus the endpoints and both
/// sides of z = 0; passes iff every value is <= 1e-12.
KernelCertificate certify_kernel_nonpositive(const KernelSpec& kernel, std::size_t sample_count);

struct PointwiseBoundReport {
  double max_margin = 0.0;  // max_j (D q)_j - b v_j theta_j^4
  std::size_t argmax = 0;
  double tolerance = 0.0;   // 10 h^2 max_j b v_j theta_j^4
  bool pass = false;
};

/// Lagrangian pointwise bound q_x <= b v theta^4 using the solver's centred operator.
PointwiseBoundReport check_pointwise_bound(const State& state, const Grid& grid,
                                           const Params& params);

/// q0 satisfying the compatibility condition for (v0, theta0).
Field init_compatible_q(FieldView v0, FieldView theta0, const Grid& grid, const Params& params);

}  // namespace radns
