// SPDX-License-Identifier: Apache-2.0
#include "dsr/linalg.hpp"

#include <string>
#include <utility>

#include "dsr/error.hpp"

namespace dsr {

Matrix Matrix::identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::rounded(int bits) const {
  Matrix r(rows_, cols_);
  for (size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k].rounded(bits);
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), Errc::invalid_argument, "matrix shape mismatch");
  Matrix c(a.rows(), b.cols());
  Real t;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) {
      Real s = 0;
      for (size_t k = 0; k < a.cols(); ++k) {
        mpfr_mul(t.raw(), a(i, k).raw(), b(k, j).raw(), MPFR_RNDN);
        s += t;
      }
      c(i, j) = std::move(s);
    }
  return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
  require(a.cols() == x.size(), Errc::invalid_argument, "matrix-vector shape mismatch");
  Vector y(a.rows());
  for (size_t i = 0; i < a.rows(); ++i) {
    Real s = 0;
    for (size_t k = 0; k < a.cols(); ++k) s += a(i, k) * x[k];
    y[i] = std::move(s);
  }
  return y;
}

Real max_abs(const Matrix& a) {
  Real m = 0;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j)
      if (abs(a(i, j)) > m) m = abs(a(i, j));
  return m;
}

Real max_abs(const Vector& x) {
  Real m = 0;
  for (const auto& v : x)
    if (abs(v) > m) m = abs(v);
  return m;
}

Matrix cholesky(const Matrix& a) {
  const size_t n = a.rows();
  require(a.cols() == n, Errc::invalid_argument, "cholesky needs a square matrix");
  Matrix l(n, n);
  for (size_t j = 0; j < n; ++j) {
    Real d = a(j, j);
    for (size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0))
      fail(Errc::ill_conditioned,
           "matrix not numerically positive definite at pivot " + std::to_string(j + 1));
    l(j, j) = sqrt(d);
    for (size_t i = j + 1; i < n; ++i) {
      Real s = a(i, j);
      for (size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

Matrix cholesky_solve(const Matrix& l, const Matrix& b) {
  const size_t n = l.rows();
  require(b.rows() == n, Errc::invalid_argument, "cholesky_solve shape mismatch");
  Matrix x = b;
  for (size_t c = 0; c < b.cols(); ++c) {
    for (size_t i = 0; i < n; ++i) {
      Real s = x(i, c);
      for (size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
      x(i, c) = s / l(i, i);
    }
    for (size_t i = n; i-- > 0;) {
      Real s = x(i, c);
      for (size_t k = i + 1; k < n; ++k) s -= l(k, i) * x(k, c);
      x(i, c) = s / l(i, i);
    }
  }
  return x;
}

Vector lu_solve(Matrix a, Vector b) {
  const size_t n = a.rows();
  require(a.cols() == n && b.size() == n, Errc::invalid_argument, "lu_solve shape mismatch");
  for (size_t k = 0; k < n; ++k) {
    size_t p = k;
    for (size_t i = k + 1; i < n; ++i)
      if (abs(a(i, k)) > abs(a(p, k))) p = i;
    if (a(p, k).is_zero()) fail(Errc::ill_conditioned, "singular matrix");
    if (p != k) {
      for (size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(b[k], b[p]);
    }
    for (size_t i = k + 1; i < n; ++i) {
      Real f = a(i, k) / a(k, k);
      for (size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  Vector x(n);
  for (size_t i = n; i-- > 0;) {
    Real s = b[i];
    for (size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace dsr
