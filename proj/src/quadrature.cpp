// SPDX-License-Identifier: Apache-2.0
#include "dsr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "dsr/error.hpp"

namespace dsr {

namespace {

QuadratureRule compute_gauss_legendre(int q) {
  const int bits = precision_bits();
  PrecisionScope guard(bits + 32);
  QuadratureRule r;
  r.nodes.resize(q);
  r.weights.resize(q);
  const Real tol = ldexp(Real(1), -(bits + 8));
  for (int i = 0; i < (q + 1) / 2; ++i) {
    Real x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
    Real dp;
    for (int it = 0; it < 200; ++it) {
      Real p0 = 1, p1 = x;
      for (int n = 2; n <= q; ++n) {
        Real p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      if (q == 1) p0 = 1;
      dp = q * (x * p1 - p0) / (x * x - 1);
      Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) < tol) break;
    }
    Real p0 = 1, p1 = x;
    for (int n = 2; n <= q; ++n) {
      Real p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
      p0 = std::move(p1);
      p1 = std::move(p2);
    }
    if (q == 1) p0 = 1;
    dp = q * (x * p1 - p0) / (x * x - 1);
    Real w = 2 / ((1 - x * x) * dp * dp);
    r.nodes[i] = (-x).rounded(bits);
    r.nodes[q - 1 - i] = x.rounded(bits);
    r.weights[i] = w.rounded(bits);
    r.weights[q - 1 - i] = w.rounded(bits);
  }
  if (q % 2 == 1) {
    PrecisionScope inner(bits);
    r.nodes[q / 2] = Real(0);
  }
  return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int q) {
  require(q >= 1, Errc::invalid_argument, "quadrature order must be positive");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<QuadratureRule>> cache;
  const auto key = std::make_pair(q, precision_bits());
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto rule = std::make_unique<QuadratureRule>(compute_gauss_legendre(q));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(rule));
  return *it->second;
}

QuadratureRule gauss_legendre(const Real& a, const Real& b, int q) {
  const auto& ref = gauss_legendre(q);
  QuadratureRule r;
  Real half = (b - a) / 2, mid = (a + b) / 2;
  for (size_t i = 0; i < ref.size(); ++i) {
    r.nodes.push_back(mid + half * ref.nodes[i]);
    r.weights.push_back(half * ref.weights[i]);
  }
  return r;
}

QuadratureRule graded_rule(const Real& T, const Real& max_rate, int q) {
  require(T > 0 && T.is_finite(), Errc::invalid_argument, "graded_rule needs a finite T > 0");
  int levels = 0;
  Real width = T;
  while (8 * max_rate * width > 1 && levels < 200) {
    width /= 2;
    ++levels;
  }
  QuadratureRule r;
  auto append = [&](const Real& a, const Real& b) {
    auto p = gauss_legendre(a, b, q);
    for (size_t i = 0; i < p.size(); ++i) {
      r.nodes.push_back(std::move(p.nodes[i]));
      r.weights.push_back(std::move(p.weights[i]));
    }
  };
  append(Real(0), width);
  for (int j = levels; j >= 1; --j) append(ldexp(T, -j), ldexp(T, -(j - 1)));
  return r;
}

MonotoneCubic::MonotoneCubic(Vector x, Vector y) : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  require(n >= 2 && y_.size() == n, Errc::interpolation, "interpolation needs at least two samples");
  for (size_t i = 1; i < n; ++i)
    require(x_[i] > x_[i - 1], Errc::interpolation, "interpolation abscissae must increase");
  Vector delta(n - 1), h(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.resize(n);
  if (n == 2) {
    d_[0] = delta[0];
    d_[1] = delta[0];
    return;
  }
  for (size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1].sign() * delta[i].sign() <= 0) {
      d_[i] = 0;
    } else {
      Real w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto endpoint = [](const Real& h0, const Real& h1, const Real& d0, const Real& d1) {
    Real d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d.sign() != d0.sign()) return Real(0);
    if (d0.sign() != d1.sign() && abs(d) > abs(3 * d0)) return Real(3 * d0);
    return d;
  };
  d_[0] = endpoint(h[0], h[1], delta[0], delta[1]);
  d_[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

Real MonotoneCubic::operator()(const Real& t) const {
  const size_t n = x_.size();
  require(t >= x_.front() && t <= x_.back(), Errc::interpolation,
          "interpolation point outside the sampled range");
  size_t i = static_cast<size_t>(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin());
  i = std::min(std::max<size_t>(i, 1), n - 1) - 1;
  Real h = x_[i + 1] - x_[i];
  Real s = (t - x_[i]) / h;
  Real s2 = s * s, s3 = s2 * s;
  Real h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  Real h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

}  // namespace dsr
