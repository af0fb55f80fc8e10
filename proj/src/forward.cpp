// SPDX-License-Identifier: Apache-2.0
#include "dsr/forward.hpp"

#include <algorithm>
#include <random>
#include <utility>

#include "dsr/error.hpp"

namespace dsr {

void InitialDatum::check() const {
  require(mu > 0, Errc::invalid_argument, "domain scale mu must be positive");
  if (regularity) {
    require(regularity->theta >= 0 && regularity->m > 0, Errc::invalid_argument,
            "regularity needs theta >= 0 and m > 0");
    Real s = 0;
    for (size_t k = 1; k <= coeffs.size(); ++k)
      s += pow(1 + Real(k) * Real(k), regularity->theta) * coeffs.at(k) * coeffs.at(k);
    Real m2 = regularity->m * regularity->m;
    if (s > m2 * (1 + ldexp(Real(1), 16 - precision_bits())))
      fail(Errc::invalid_argument, "initial datum lies outside the declared Sobolev ball");
  }
}

Real InitialDatum::l2_norm() const { return sqrt(mu * pi() / 2) * norm(coeffs, NormKind::L2()); }

void DirichletSample::check() const {
  require(!times.empty(), Errc::invalid_argument, "sample has no times");
  require(times.size() == values.size(), Errc::invalid_argument, "sample times/values length mismatch");
  require(horizon > 0, Errc::invalid_argument, "sample horizon must be positive");
  require(noise_level >= 0, Errc::invalid_argument, "noise level must be nonnegative");
  for (size_t i = 0; i < times.size(); ++i) {
    require(times[i] >= 0 && times[i] <= horizon, Errc::invalid_argument, "sample time outside [0, T]");
    require(i == 0 || times[i] > times[i - 1], Errc::invalid_argument, "sample times must increase");
  }
}

void TensorDatum::check() const {
  require(!factors.empty(), Errc::invalid_argument, "tensor datum needs d >= 1");
  for (const auto& f : factors) f.check();
}

Real TensorDatum::l2_norm() const {
  // sum over multi-indices of prod_i fhat_{k_i}^2 (mu_i pi / 2), summed one axis at a time
  Real total = 1;
  for (const auto& f : factors) {
    Real axis = 0;
    for (const auto& c : f.coeffs.entries()) axis += c * c;
    total *= axis * f.mu * pi() / 2;
  }
  return sqrt(total);
}

Real eval_dirichlet(const CoefficientSequence& a, const EigenvalueSequence& seq, const Real& t) {
  require(t >= 0, Errc::domain, "Dirichlet series evaluated at negative time");
  const size_t n = a.support();
  require(n <= seq.size(), Errc::invalid_argument, "coefficient support exceeds the exponent sequence");
  Real s = 0;
  for (size_t k = 1; k <= n; ++k) {
    const Real& c = a.at(k);
    if (!c.is_zero()) s += c * exp(-seq.at(k) * t);
  }
  return s;
}

SeriesEvaluator dirichlet_evaluator(CoefficientSequence a, EigenvalueSequence seq) {
  return [a = std::move(a), seq = std::move(seq)](const Real& t) { return eval_dirichlet(a, seq, t); };
}

EigenvalueSequence heat_exponents(const Real& alpha, const Real& mu, size_t count) {
  return EigenvalueSequence::power(alpha, mu, count);
}

Real heat_point(const InitialDatum& f, const Real& alpha, const Real& x0, const Real& t) {
  require(alpha > 0, Errc::invalid_argument, "alpha must be positive");
  require(x0 > 0 && x0 < f.mu * pi(), Errc::domain, "sensor point outside (0, mu pi)");
  require(t >= 0, Errc::domain, "heat solution evaluated at negative time");
  Real s = 0;
  const Real two_alpha = 2 * alpha;
  for (size_t k = 1; k <= f.coeffs.support(); ++k) {
    const Real& c = f.coeffs.at(k);
    if (c.is_zero()) continue;
    Real kk = Real(k) / f.mu;
    s += c * exp(-pow(kk, two_alpha) * t) * sin(kk * x0);
  }
  return s;
}

Real boundary_flux(const InitialDatum& f, const Real& alpha, const Real& t) {
  require(alpha > 0, Errc::invalid_argument, "alpha must be positive");
  require(t > 0, Errc::domain, "boundary flux needs t > 0");
  Real s = 0;
  const Real two_alpha = 2 * alpha;
  for (size_t k = 1; k <= f.coeffs.support(); ++k) {
    const Real& c = f.coeffs.at(k);
    if (c.is_zero()) continue;
    Real kk = Real(k) / f.mu;
    s += kk * c * exp(-pow(kk, two_alpha) * t);
  }
  return s;
}

CoefficientSequence flux_coefficients(const InitialDatum& f) {
  Vector v(f.coeffs.size());
  for (size_t k = 1; k <= v.size(); ++k) v[k - 1] = Real(k) / f.mu * f.coeffs.at(k);
  return CoefficientSequence(std::move(v));
}

Real tensor_eval(const TensorDatum& F, const Real& alpha, const Vector& x, const Real& t) {
  require(x.size() == F.dim(), Errc::invalid_argument, "tensor point dimension mismatch");
  Real p = 1;
  for (size_t i = 0; i < F.dim(); ++i) {
    p *= heat_point(F.factors[i], alpha, x[i], t);
    if (p.is_zero()) break;
  }
  return p;
}

SeriesInput::SeriesInput(SeriesEvaluator f, const Real& noise_level, NoiseNorm noise_norm)
    : eval_(std::move(f)), noise_level_(noise_level), noise_norm_(noise_norm) {
  require(noise_level >= 0, Errc::invalid_argument, "noise level must be nonnegative");
}

SeriesInput::SeriesInput(DirichletSample s) {
  s.check();
  noise_level_ = s.noise_level;
  noise_norm_ = s.noise_norm;
  if (s.times.size() >= 2) interp_.emplace(s.times, s.values);
  sample_ = std::move(s);
}

const DirichletSample& SeriesInput::sample() const {
  require(sample_.has_value(), Errc::invalid_argument, "series input is not a sample");
  return *sample_;
}

Real SeriesInput::noise_level() const { return noise_level_; }
NoiseNorm SeriesInput::noise_norm() const { return noise_norm_; }

std::optional<size_t> SeriesInput::find(const Real& t) const {
  const Vector& ts = sample_->times;
  auto it = std::lower_bound(ts.begin(), ts.end(), t);
  const Real tol = max(Real(1), abs(t)) * ldexp(Real(1), 8 - precision_bits());
  for (auto cand : {it, it == ts.begin() ? it : it - 1}) {
    if (cand != ts.end() && abs(*cand - t) <= tol) return static_cast<size_t>(cand - ts.begin());
  }
  return std::nullopt;
}

bool SeriesInput::has_exact(const Real& t) const { return !sample_ || find(t).has_value(); }

Real SeriesInput::operator()(const Real& t) const {
  if (!sample_) return eval_(t);
  if (auto i = find(t)) return sample_->values[*i];
  require(interp_.has_value(), Errc::interpolation, "single-point sample cannot be interpolated");
  return (*interp_)(t);
}

Real SeriesInput::max_spacing() const {
  Real h = 0;
  if (!sample_) return h;
  for (size_t i = 1; i < sample_->times.size(); ++i) h = max(h, sample_->times[i] - sample_->times[i - 1]);
  return h;
}

Vector trapezoid_weights(const Vector& times) {
  const size_t n = times.size();
  Vector w(n);
  for (size_t i = 0; i + 1 < n; ++i) {
    Real h = (times[i + 1] - times[i]) / 2;
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

DirichletSample sample(const SeriesEvaluator& truth, Vector times, const Real& T, const Real& epsilon,
                       NoiseNorm noise_norm, uint64_t seed) {
  require(!times.empty(), Errc::invalid_argument, "sample: empty times list");
  require(epsilon >= 0, Errc::invalid_argument, "sample: epsilon must be nonnegative");
  DirichletSample s;
  s.horizon = T;
  s.noise_level = epsilon;
  s.noise_norm = noise_norm;
  s.seed = seed;
  s.times = std::move(times);
  s.values.assign(s.times.size(), Real(0));
  s.check();
  for (size_t j = 0; j < s.times.size(); ++j) s.values[j] = truth(s.times[j]);
  if (epsilon.is_zero()) return s;

  std::mt19937_64 rng(seed);
  const size_t n = s.times.size();
  if (noise_norm == NoiseNorm::sup) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (size_t j = 0; j < n; ++j) s.values[j] += epsilon * Real(u(rng));
  } else {
    std::normal_distribution<double> g(0.0, 1.0);
    Vector noise(n);
    for (auto& v : noise) v = Real(g(rng));
    Vector w = trapezoid_weights(s.times);
    Real l2 = 0;
    for (size_t j = 0; j < n; ++j) l2 += w[j] * noise[j] * noise[j];
    l2 = sqrt(l2);
    require(l2 > 0, Errc::invalid_argument, "sample: L2 noise needs at least two distinct times");
    for (size_t j = 0; j < n; ++j) s.values[j] += epsilon / l2 * noise[j];
  }
  return s;
}

}  // namespace dsr
