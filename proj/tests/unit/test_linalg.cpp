#include <doctest.h>

#include "dsr/error.hpp"
#include "dsr/quadrature.hpp"
#include "dsr/stats.hpp"
#include "oracles.hpp"

using namespace dsr;

namespace {
Matrix hilbert(size_t n) {
  Matrix h(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) h(i, j) = Real(1) / Real(static_cast<long>(i + j + 1));
  return h;
}
}  // namespace

TEST_CASE("cholesky reproduces an ill-conditioned SPD matrix") {
  PrecisionScope s(512);
  const Matrix h = hilbert(12);
  const Matrix l = cholesky(h);
  const Matrix back = l * l.transposed();
  Real err = 0;
  for (size_t i = 0; i < 12; ++i)
    for (size_t j = 0; j < 12; ++j) err = max(err, abs(back(i, j) - h(i, j)));
  CHECK(err < ldexp(Real(1), -500));
  for (size_t i = 0; i < 12; ++i)
    for (size_t j = i + 1; j < 12; ++j) CHECK(l(i, j).is_zero());
}

TEST_CASE("cholesky_solve matches the Gauss-Jordan inverse") {
  PrecisionScope s(512);
  const Matrix h = hilbert(10);
  const Matrix x = cholesky_solve(cholesky(h), Matrix::identity(10));
  const Matrix ref = oracle::inverse(h);
  CHECK(max_abs(x) > 1e12);
  Real err = 0;
  for (size_t i = 0; i < 10; ++i)
    for (size_t j = 0; j < 10; ++j) err = max(err, abs(x(i, j) - ref(i, j)) / max_abs(ref));
  CHECK(err < Real("1e-100"));
}

TEST_CASE("cholesky rejects an indefinite matrix") {
  Matrix a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(1, 0) = 2;
  a(1, 1) = 1;
  try {
    cholesky(a);
    FAIL("expected ill_conditioned");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ill_conditioned);
  }
}

TEST_CASE("lu_solve recovers a planted solution") {
  PrecisionScope s(256);
  Matrix a(4, 4);
  const double v[4][4] = {{0, 2, 1, 3}, {4, 1, 0, 2}, {1, 1, 5, 1}, {2, 0, 1, 7}};
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) a(i, j) = v[i][j];
  const Vector x{Real(1), Real(-2), Real(3), Real(0.5)};
  const Vector b = a * x;
  const Vector y = lu_solve(a, b);
  for (size_t i = 0; i < 4; ++i) CHECK(abs(y[i] - x[i]) < ldexp(Real(1), -240));
}

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2q-1 exactly") {
  PrecisionScope s(256);
  for (int q : {4, 16, 32}) {
    const auto& r = gauss_legendre(q);
    CHECK(r.size() == static_cast<size_t>(q));
    const long deg = 2 * q - 2;  // even power: exact integral 2/(deg+1)
    Real sum = 0;
    for (size_t i = 0; i < r.size(); ++i) sum += r.weights[i] * pow(r.nodes[i], deg);
    CHECK(abs(sum - Real(2) / Real(deg + 1)) < ldexp(Real(1), -240));
  }
  const QuadratureRule m = gauss_legendre(Real(1), Real(3), 8);
  Real sum = 0;
  for (size_t i = 0; i < m.size(); ++i) sum += m.weights[i] * m.nodes[i] * m.nodes[i];
  CHECK(abs(sum - Real(26) / 3) < ldexp(Real(1), -240));
}

TEST_CASE("graded rule resolves fast exponentials near zero") {
  PrecisionScope s(256);
  for (double rate : {1.0, 100.0, 1e4}) {
    const QuadratureRule r = graded_rule(Real(1), Real(rate), 32);
    Real sum = 0;
    for (size_t i = 0; i < r.size(); ++i) sum += r.weights[i] * exp(-Real(rate) * r.nodes[i]);
    const Real ref = oracle::exp_inner(Real(rate), Real(0), Real(1));
    CHECK(abs(sum - ref) / ref < Real("1e-45"));
  }
}

TEST_CASE("monotone cubic interpolates nodes and preserves monotonicity") {
  Vector x, y;
  for (int i = 0; i <= 10; ++i) {
    x.push_back(Real(i) / 10);
    y.push_back(exp(-Real(5) * x.back()));
  }
  MonotoneCubic c(x, y);
  for (size_t i = 0; i < x.size(); ++i) CHECK(c(x[i]) == y[i]);
  Real prev = c(Real(0));
  for (int i = 1; i <= 200; ++i) {
    const Real v = c(Real(i) / 200);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(abs(c(Real(0.55)) - exp(Real(-2.75))) < 1e-3);
}

TEST_CASE("linear_fit agrees with the closed-form regression") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6}, y{2.1, 3.9, 6.2, 7.8, 10.1, 12.2};
  const LinearFit f = linear_fit(x, y);
  const oracle::Ols o = oracle::ols(x, y);
  CHECK(f.slope == doctest::Approx(o.slope).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(o.intercept).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(o.r2).epsilon(1e-12));
  CHECK(linear_fit({1, 1, 1}, {1, 2, 3}).degenerate);
  CHECK(median({3, 1, 2}) == 2);
  CHECK(median({4, 1, 2, 3}) == 2.5);
}
