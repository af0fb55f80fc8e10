// SPDX-License-Identifier: Apache-2.0
//
// Sensor points x0 in (0, mu pi) with k |sin(k x0 / mu)| bounded below, and
// the coefficient map between sine modes and the sensor's Dirichlet series.
#pragma once

#include <optional>
#include <string>

#include "dsr/forward.hpp"

namespace dsr {

enum class SensorStrategy { golden, silver, explicit_value };

struct SensorPoint {
  Real x0;
  Real mu = 1;
  SensorStrategy strategy = SensorStrategy::explicit_value;
  /// Expression re-evaluated at higher precision during verification (may be empty).
  std::string expression;
  std::optional<Real> d0_empirical;  // set by certify
  size_t K = 0;
  size_t argmin_k = 0;

  bool verified() const { return d0_empirical.has_value(); }
};

/// Evaluates expressions such as "golden", "pi/3", "mu*pi*(sqrt(2)-1)", "1.25".
/// Names: pi, e, mu, phi = (sqrt(5)-1)/2, golden, silver; functions sqrt, sin, cos, exp, log.
Real eval_expression(const std::string& expr, const Real& mu = 1);

SensorPoint propose_point(SensorStrategy strategy, const Real& mu = 1);
SensorPoint explicit_point(const std::string& expression, const Real& mu = 1);
SensorPoint explicit_point(const Real& x0, const Real& mu = 1);

struct SensorCheck {
  bool pass = false;
  Real d0_empirical;   // min over k <= K of k |sin(k x0 / mu)|
  size_t argmin_k = 0;
  size_t first_zero = 0;  // first k whose sine is unresolved from zero (0: none)
  int bits_used = 0;
};

/// Scans k = 1..K at the working precision plus 2 log2(K) + 32 guard bits.
SensorCheck verify_point(const SensorPoint& pt, size_t K);
/// verify_point, then records d0 and K on the point; throws Errc::refused on failure.
SensorPoint certify(SensorPoint pt, size_t K);

/// a_k = sin(k x0 / mu) fhat_k.
CoefficientSequence mode_to_series(const InitialDatum& f, const SensorPoint& pt);
/// fhat_k = a_k / sin(k x0 / mu); refuses support beyond the verified range.
InitialDatum series_to_mode(const CoefficientSequence& a, const SensorPoint& pt);

std::string to_string(SensorStrategy s);

}  // namespace dsr
