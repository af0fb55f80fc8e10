// SPDX-License-Identifier: Apache-2.0
//
// Forward maps: Dirichlet series, 1-D fractional heat solutions, boundary
// fluxes, tensor-product solutions, and noisy sampling.
//
// Sine basis on (0, mu pi): f(x) = sum_k fhat_k sin(k x / mu), with
// eigenvalues (k/mu)^(2 alpha).
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dsr/quadrature.hpp"
#include "dsr/sequences.hpp"

namespace dsr {

struct Regularity {
  Real theta;  // >= 0
  Real m;      // > 0
};

struct InitialDatum {
  CoefficientSequence coeffs;
  Real mu = 1;
  std::optional<Regularity> regularity;

  /// Throws when mu <= 0 or the declared ball is violated on the support.
  void check() const;
  /// L2(0, mu pi) norm.
  Real l2_norm() const;
};

enum class NoiseNorm { sup, l2 };

struct DirichletSample {
  Vector times;
  Vector values;
  Real noise_level = 0;
  NoiseNorm noise_norm = NoiseNorm::sup;
  Real horizon = 1;
  std::optional<uint64_t> seed;

  void check() const;
};

struct TensorDatum {
  std::vector<InitialDatum> factors;
  bool non_resonant = true;  // declared, never verified

  size_t dim() const { return factors.size(); }
  void check() const;
  /// L2 norm over the box, from the tensor coefficients.
  Real l2_norm() const;
};

using SeriesEvaluator = std::function<Real(const Real&)>;

Real eval_dirichlet(const CoefficientSequence& a, const EigenvalueSequence& seq, const Real& t);
SeriesEvaluator dirichlet_evaluator(CoefficientSequence a, EigenvalueSequence seq);

/// (k/mu)^(2 alpha), k = 1..count.
EigenvalueSequence heat_exponents(const Real& alpha, const Real& mu, size_t count);

Real heat_point(const InitialDatum& f, const Real& alpha, const Real& x0, const Real& t);
Real boundary_flux(const InitialDatum& f, const Real& alpha, const Real& t);
/// Coefficients (k/mu) fhat_k of the flux series.
CoefficientSequence flux_coefficients(const InitialDatum& f);

Real tensor_eval(const TensorDatum& F, const Real& alpha, const Vector& x, const Real& t);

/// Noisy samples of `truth` at `times` in [0, T].
DirichletSample sample(const SeriesEvaluator& truth, Vector times, const Real& T, const Real& epsilon,
                       NoiseNorm noise_norm, uint64_t seed);

/// Series data handed to a recovery route: an exact evaluator or a sample.
/// Sample values are read directly at sample times and by monotone cubic
/// interpolation elsewhere.
class SeriesInput {
 public:
  SeriesInput(SeriesEvaluator f, const Real& noise_level = 0, NoiseNorm noise_norm = NoiseNorm::sup);
  SeriesInput(DirichletSample s);

  bool is_sample() const { return sample_.has_value(); }
  const DirichletSample& sample() const;
  Real noise_level() const;
  NoiseNorm noise_norm() const;
  Real operator()(const Real& t) const;
  /// True when t coincides with a sample time (always true for evaluators).
  bool has_exact(const Real& t) const;
  /// Largest gap between consecutive sample times (0 for evaluators).
  Real max_spacing() const;

 private:
  std::optional<size_t> find(const Real& t) const;

  SeriesEvaluator eval_;
  Real noise_level_ = 0;
  NoiseNorm noise_norm_ = NoiseNorm::sup;
  std::optional<DirichletSample> sample_;
  std::optional<MonotoneCubic> interp_;
};

/// Trapezoid weights of an increasing grid, used for empirical L2 norms.
Vector trapezoid_weights(const Vector& times);

}  // namespace dsr
