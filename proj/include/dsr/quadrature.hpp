// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "dsr/linalg.hpp"

namespace dsr {

struct QuadratureRule {
  Vector nodes;
  Vector weights;
  size_t size() const { return nodes.size(); }
};

/// q-point Gauss-Legendre rule on [-1, 1] at the current precision.
const QuadratureRule& gauss_legendre(int q);

/// q-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(const Real& a, const Real& b, int q);

/// Composite Gauss-Legendre rule on (0, T) with panels refined dyadically
/// toward t = 0 until max_rate * (first panel width) <= 1/8.
QuadratureRule graded_rule(const Real& T, const Real& max_rate, int q);

/// Piecewise monotone cubic (Fritsch-Carlson) interpolant.
class MonotoneCubic {
 public:
  MonotoneCubic(Vector x, Vector y);
  Real operator()(const Real& t) const;
  const Vector& x() const { return x_; }

 private:
  Vector x_, y_, d_;
};

}  // namespace dsr
