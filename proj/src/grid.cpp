#include "radns/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace radns {

Grid::Grid(std::size_t n_cells) : n_(n_cells), h_(0.0) {
  if (n_cells < kMinCells) {
    throw ShapeError("grid needs at least " + std::to_string(kMinCells) + " cells, got " +
                     std::to_string(n_cells));
  }
  h_ = 1.0 / static_cast<double>(n_cells);
  centers_.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) centers_[j] = center(j);
}

void Grid::check(FieldView f, const char* what) const {
  if (f.size() != n_) {
    throw ShapeError(std::string(what) + " has " + std::to_string(f.size()) +
                     " entries, grid has " + std::to_string(n_) + " cells");
  }
}

Field diff_centered(FieldView f, const Grid& grid) {
  grid.check(f);
  const double inv = 0.5 / grid.h();
  Field out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    out[j] = (f[grid.next(j)] - f[grid.prev(j)]) * inv;
  }
  return out;
}

Field div_flux(FieldView faces, const Grid& grid) {
  grid.check(faces, "face flux");
  const double inv = 1.0 / grid.h();
  Field out(faces.size());
  for (std::size_t j = 0; j < faces.size(); ++j) {
    out[j] = (faces[grid.next(j)] - faces[j]) * inv;
  }
  return out;
}

Field face_average(FieldView f, const Grid& grid) {
  grid.check(f);
  Field out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = 0.5 * (f[grid.prev(i)] + f[i]);
  return out;
}

Field face_gradient(FieldView f, const Grid& grid) {
  grid.check(f);
  const double inv = 1.0 / grid.h();
  Field out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = (f[i] - f[grid.prev(i)]) * inv;
  return out;
}

Field second_difference(FieldView f, const Grid& grid) {
  grid.check(f);
  const double inv = 1.0 / (grid.h() * grid.h());
  Field out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    out[j] = (f[grid.next(j)] - 2.0 * f[j] + f[grid.prev(j)]) * inv;
  }
  return out;
}

double quadrature(FieldView f, const Grid& grid) {
  grid.check(f);
  double sum = 0.0;
  for (double x : f) sum += x;
  return grid.h() * sum;
}

Field CyclicTridiagonal::multiply(FieldView x) const {
  const std::size_t n = size();
  if (x.size() != n) throw ShapeError("matrix/vector size mismatch");
  Field out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = i == 0 ? n - 1 : i - 1;
    const std::size_t ip = i + 1 == n ? 0 : i + 1;
    out[i] = sub[i] * x[im] + diag[i] * x[i] + sup[i] * x[ip];
  }
  return out;
}

double CyclicTridiagonal::norm_inf() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    m = std::max(m, std::abs(sub[i]) + std::abs(diag[i]) + std::abs(sup[i]));
  }
  return m;
}

namespace {

// Thomas algorithm on the non-periodic part; sub[0] and sup[n-1] are ignored.
void thomas(FieldView sub, FieldView diag, FieldView sup, FieldView rhs, double floor,
            Field& scratch, Field& x) {
  const std::size_t n = diag.size();
  scratch.resize(n);
  x.resize(n);
  double pivot = diag[0];
  if (std::abs(pivot) <= floor) throw SingularMatrixError("zero pivot in row 0");
  x[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    scratch[i] = sup[i - 1] / pivot;
    pivot = diag[i] - sub[i] * scratch[i];
    if (std::abs(pivot) <= floor) {
      throw SingularMatrixError("pivot below floor in row " + std::to_string(i));
    }
    x[i] = (rhs[i] - sub[i] * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= scratch[i + 1] * x[i + 1];
}

}  // namespace

Field solve_cyclic_tridiagonal(const CyclicTridiagonal& matrix, FieldView rhs) {
  const std::size_t n = matrix.size();
  if (matrix.sub.size() != n || matrix.sup.size() != n || rhs.size() != n) {
    throw ShapeError("cyclic tridiagonal coefficient arrays and rhs must share one length");
  }
  if (n < 3) throw ShapeError("cyclic tridiagonal solve needs at least 3 rows");

  double max_diag = 0.0;
  for (double d : matrix.diag) max_diag = std::max(max_diag, std::abs(d));
  if (!(max_diag > 0.0)) throw SingularMatrixError("matrix has a zero diagonal");
  const double floor = kPivotFloor * max_diag;

  // A = T + w z^T with w = (g, 0, ..., 0, lower) and z = (1, 0, ..., 0, upper/g).
  const double lower = matrix.sup[n - 1];  // A[n-1][0]
  const double upper = matrix.sub[0];      // A[0][n-1]
  const double g = matrix.diag[0] != 0.0 ? -matrix.diag[0] : -max_diag;

  Field diag = matrix.diag;
  diag[0] -= g;
  diag[n - 1] -= lower * upper / g;

  Field scratch;
  Field x;
  thomas(matrix.sub, diag, matrix.sup, rhs, floor, scratch, x);

  Field w(n, 0.0);
  w[0] = g;
  w[n - 1] = lower;
  Field y;
  thomas(matrix.sub, diag, matrix.sup, w, floor, scratch, y);

  const double zy = y[0] + upper * y[n - 1] / g;
  const double denom = 1.0 + zy;
  // The correction is singular exactly when the rank-one update cancels the
  // identity; compare against the size of the terms that were summed.
  const double scale = 1.0 + std::abs(y[0]) + std::abs(upper * y[n - 1] / g);
  if (std::abs(denom) <= kPivotFloor * static_cast<double>(n) * scale) {
    throw SingularMatrixError("cyclic correction denominator vanishes (matrix is singular)");
  }
  const double factor = (x[0] + upper * x[n - 1] / g) / denom;
  for (std::size_t i = 0; i < n; ++i) x[i] -= factor * y[i];
  return x;
}

namespace {

// Roots of unity exp(-i pi k / n) for k = 0 .. 2n-1. Phases are reduced in
// integer arithmetic so no large angles reach sin/cos.
std::vector<Complex> half_roots(std::size_t n) {
  std::vector<Complex> roots(2 * n);
  for (std::size_t k = 0; k < 2 * n; ++k) {
    const double angle = -std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    roots[k] = {std::cos(angle), std::sin(angle)};
  }
  return roots;
}

// exp(-2 pi i m x_j) with x_j = (2j + 1 - n) / (2n) is roots[m (2j + 1 - n) mod 2n].
std::size_t phase_index(long m, std::size_t j, std::size_t n) {
  const long two_n = 2 * static_cast<long>(n);
  long k = (m * (2 * static_cast<long>(j) + 1 - static_cast<long>(n))) % two_n;
  if (k < 0) k += two_n;
  return static_cast<std::size_t>(k);
}

}  // namespace

Spectrum dft(std::span<const Complex> f) {
  const std::size_t n = f.size();
  if (n == 0) throw ShapeError("dft of an empty field");
  const auto roots = half_roots(n);
  const double h = 1.0 / static_cast<double>(n);
  Spectrum out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long m = wavenumber(k, n);
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += f[j] * roots[phase_index(m, j, n)];
    out[k] = h * acc;
  }
  return out;
}

Spectrum dft(FieldView f) {
  std::vector<Complex> c(f.begin(), f.end());
  return dft(std::span<const Complex>(c));
}

std::vector<Complex> idft(std::span<const Complex> coefficients) {
  const std::size_t n = coefficients.size();
  if (n == 0) throw ShapeError("idft of an empty spectrum");
  const auto roots = half_roots(n);
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const long m = wavenumber(k, n);
      acc += coefficients[k] * std::conj(roots[phase_index(m, j, n)]);
    }
    out[j] = acc;
  }
  return out;
}

}  // namespace radns
