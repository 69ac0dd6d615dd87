#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "picardnet/errors.hpp"

namespace picardnet {

using Vector = std::vector<double>;

// Dense row-major matrix. Small helper, no ownership tricks.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {
    if (r < 1 || c < 1) throw ShapeError("matrix dimensions must be positive");
  }

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

inline Vector matvec(const Matrix& m, const Vector& x) {
  if (static_cast<int>(x.size()) != m.cols)
    throw ShapeError("matvec: vector length does not match matrix columns");
  Vector y(m.rows, 0.0);
  const double* row = m.a.data();
  for (int i = 0; i < m.rows; ++i, row += m.cols) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

inline bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace picardnet
