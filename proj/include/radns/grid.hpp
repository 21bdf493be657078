#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "radns/core.hpp"

namespace radns {

/// Raised when a field does not match the grid it is used with.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the cyclic solver when a pivot falls under the configured floor.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform periodic mesh on [-1/2, 1/2] with cell-centred unknowns.
///
/// Face i sits between cells i-1 and i (indices wrap), so face 0 is the
/// periodic seam at x = -1/2.
class Grid {
 public:
  static constexpr std::size_t kMinCells = 8;

  explicit Grid(std::size_t n_cells);

  std::size_t size() const { return n_; }
  double h() const { return h_; }
  double center(std::size_t j) const { return -0.5 + (static_cast<double>(j) + 0.5) * h_; }
  double face(std::size_t i) const { return -0.5 + static_cast<double>(i) * h_; }
  const Field& centers() const { return centers_; }

  std::size_t next(std::size_t j) const { return j + 1 == n_ ? 0 : j + 1; }
  std::size_t prev(std::size_t j) const { return j == 0 ? n_ - 1 : j - 1; }

  void check(FieldView f, const char* what = "field") const;

 private:
  std::size_t n_;
  double h_;
  Field centers_;
};

/// Samples f at the cell centres.
template <typename F>
Field sample(const Grid& grid, F&& f) {
  Field out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out[j] = f(grid.center(j));
  return out;
}

/// (f[j+1] - f[j-1]) / (2h), periodic.
Field diff_centered(FieldView f, const Grid& grid);

/// (F[j+1] - F[j]) / h where F[i] lives on face i (between cells i-1 and i).
Field div_flux(FieldView faces, const Grid& grid);

/// Face values by arithmetic averaging of the two adjacent cells.
Field face_average(FieldView f, const Grid& grid);

/// (f[i] - f[i-1]) / h on face i.
Field face_gradient(FieldView f, const Grid& grid);

/// (f[j+1] - 2 f[j] + f[j-1]) / h^2, periodic.
Field second_difference(FieldView f, const Grid& grid);

/// Midpoint rule h * sum_j f[j].
double quadrature(FieldView f, const Grid& grid);

/// Periodic tridiagonal matrix. Row i reads
///   sub[i] * x[i-1] + diag[i] * x[i] + sup[i] * x[i+1]
/// with indices modulo n, so sub[0] and sup[n-1] are the corner entries.
struct CyclicTridiagonal {
  Field sub;
  Field diag;
  Field sup;

  std::size_t size() const { return diag.size(); }
  Field multiply(FieldView x) const;
  double norm_inf() const;
};

/// Relative pivot floor used by solve_cyclic_tridiagonal.
inline constexpr double kPivotFloor = 1e-13;

/// Solves A x = rhs by the Sherman-Morrison reduction to two ordinary
/// tridiagonal solves. Throws SingularMatrixError when a pivot, or the
/// rank-one correction denominator, falls below kPivotFloor * max|diag|.
Field solve_cyclic_tridiagonal(const CyclicTridiagonal& matrix, FieldView rhs);

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

/// Discrete Fourier coefficients c_m = h * sum_j f_j exp(-2 pi i m x_j)
/// for m = -n/2 .. n/2-1; entry k of the result holds m = k - n/2.
Spectrum dft(FieldView f);
Spectrum dft(std::span<const Complex> f);

/// Inverse of dft: f_j = sum_m c_m exp(2 pi i m x_j).
std::vector<Complex> idft(std::span<const Complex> coefficients);

/// Wavenumber stored at index k of a spectrum of length n.
inline long wavenumber(std::size_t k, std::size_t n) {
  return static_cast<long>(k) - static_cast<long>(n / 2);
}

}  // namespace radns
