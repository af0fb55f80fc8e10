// SPDX-License-Identifier: Apache-2.0
//
// Small dense linear algebra over Real.
#pragma once

#include <cstddef>
#include <vector>

#include "dsr/real.hpp"

namespace dsr {

using Vector = std::vector<Real>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Real& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const Real& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  static Matrix identity(size_t n);
  Matrix transposed() const;
  Matrix rounded(int bits) const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<Real> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);

/// Largest absolute entry.
Real max_abs(const Matrix& a);
Real max_abs(const Vector& x);

/// Lower Cholesky factor; throws Errc::ill_conditioned on a non-positive pivot.
Matrix cholesky(const Matrix& a);
/// Solves L L^T X = B for every column of B.
Matrix cholesky_solve(const Matrix& l, const Matrix& b);

/// Gaussian elimination with partial pivoting.
Vector lu_solve(Matrix a, Vector b);

}  // namespace dsr
