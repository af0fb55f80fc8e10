#include <doctest.h>

#include <cmath>

#include "dsr/error.hpp"
#include "dsr/forward.hpp"
#include "oracles.hpp"

using namespace dsr;

namespace {
InitialDatum datum(Vector c, Real mu = 1) {
  InitialDatum f;
  f.coeffs = CoefficientSequence(std::move(c));
  f.mu = mu;
  return f;
}
}  // namespace

TEST_CASE("Dirichlet series equals the direct sum") {
  PrecisionScope s(256);
  const auto seq = EigenvalueSequence::power(Real(1), Real(1), 10);
  const CoefficientSequence a(Vector{Real(1), Real(-0.5), Real(0.25)});
  for (double t : {0.0, 0.01, 0.3, 2.0}) {
    const Real tt(t);
    const Real ref = exp(-tt) - Real(0.5) * exp(-4 * tt) + Real(0.25) * exp(-9 * tt);
    CHECK(abs(eval_dirichlet(a, seq, tt) - ref) < 1e-70);
    CHECK(dirichlet_evaluator(a, seq)(tt) == eval_dirichlet(a, seq, tt));
  }
  CHECK_THROWS(eval_dirichlet(a, seq, Real(-1)));
  CHECK_THROWS(eval_dirichlet(CoefficientSequence(Vector(11, Real(1))), seq, Real(1)));
}

TEST_CASE("heat point value solves the fractional heat equation mode by mode") {
  PrecisionScope s(256);
  const Real mu(1.3), alpha(0.75), x0(0.9);
  const InitialDatum f = datum({Real(1), Real(0.4), Real(-0.3)}, mu);
  for (double t : {0.0, 0.05, 0.5}) {
    Real ref = 0;
    for (long k = 1; k <= 3; ++k) {
      const Real lam = pow(Real(k) / mu, 2 * alpha);
      ref += f.coeffs.at(k) * exp(-lam * Real(t)) * sin(Real(k) * x0 / mu);
    }
    CHECK(abs(heat_point(f, alpha, x0, Real(t)) - ref) < 1e-70);
  }
}

TEST_CASE("boundary flux is the x-derivative at zero") {
  PrecisionScope s(256);
  const InitialDatum f = datum({Real(1), Real(0.5), Real(-0.25), Real(0.2)}, Real(0.8));
  const Real t(0.1), h("1e-30");
  // second-order one-sided difference; u vanishes at x = 0
  const Real fd = (4 * heat_point(f, Real(1), h, t) - heat_point(f, Real(1), 2 * h, t)) / (2 * h);
  CHECK(abs(boundary_flux(f, Real(1), t) - fd) < 1e-50);
  const auto c = flux_coefficients(f);
  CHECK(abs(c.at(2) - Real(0.5) * 2 / Real(0.8)) < 1e-70);
}

TEST_CASE("L2 norm on (0, mu pi) matches quadrature of f squared") {
  const InitialDatum f = datum({Real(1), Real(0.4), Real(-0.3)}, Real(1.7));
  const double mu = 1.7;
  const double q = oracle::simpson(
      [&](double x) {
        const double v = std::sin(x / mu) + 0.4 * std::sin(2 * x / mu) - 0.3 * std::sin(3 * x / mu);
        return v * v;
      },
      0, mu * M_PI, 2000);
  CHECK(f.l2_norm().to_double() == doctest::Approx(std::sqrt(q)).epsilon(1e-10));
}

TEST_CASE("tensor evaluation and product norm") {
  PrecisionScope s(256);
  TensorDatum F;
  F.factors = {datum({Real(1), Real(0.3)}), datum({Real(0.8), Real(-0.4)}, sqrt(Real(2)))};
  const Vector x{Real(0.7), Real(1.1)};
  const Real t(0.2);
  Real ref = 1;
  for (size_t i = 0; i < 2; ++i) {
    const auto& f = F.factors[i];
    ref *= heat_point(f, Real(1), x[i], Real(0));
  }
  const Real decay_free = tensor_eval(F, Real(1), x, Real(0));
  CHECK(abs(decay_free - ref) < 1e-70);
  const Real evolved = heat_point(F.factors[0], Real(1), x[0], t) * heat_point(F.factors[1], Real(1), x[1], t);
  CHECK(abs(tensor_eval(F, Real(1), x, t) - evolved) < 1e-70);
  CHECK(abs(F.l2_norm() - F.factors[0].l2_norm() * F.factors[1].l2_norm()) < 1e-70);
}

TEST_CASE("sampling is deterministic and respects the noise level") {
  PrecisionScope s(128);
  const auto seq = EigenvalueSequence::power(Real(1), Real(1), 4);
  const auto truth = dirichlet_evaluator(CoefficientSequence(Vector{Real(1), Real(1)}), seq);
  Vector times;
  for (int i = 0; i <= 50; ++i) times.push_back(Real(i) / 50);
  const Real eps("1e-3");
  const auto a = sample(truth, times, Real(1), eps, NoiseNorm::sup, 11);
  const auto b = sample(truth, times, Real(1), eps, NoiseNorm::sup, 11);
  const auto c = sample(truth, times, Real(1), eps, NoiseNorm::sup, 12);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  for (size_t j = 0; j < times.size(); ++j) CHECK(abs(a.values[j] - truth(times[j])) <= eps);

  const auto l2 = sample(truth, times, Real(1), eps, NoiseNorm::l2, 3);
  const Vector w = trapezoid_weights(times);
  Real n2 = 0;
  for (size_t j = 0; j < times.size(); ++j) n2 += w[j] * (l2.values[j] - truth(times[j])) * (l2.values[j] - truth(times[j]));
  CHECK(abs(sqrt(n2) - eps) < Real("1e-30"));

  CHECK_THROWS(sample(truth, {Real(0.5), Real(0.2)}, Real(1), eps, NoiseNorm::sup, 0));
  CHECK_THROWS(sample(truth, {Real(2)}, Real(1), eps, NoiseNorm::sup, 0));
}

TEST_CASE("sample input reads exact values at nodes and interpolates between") {
  const auto seq = EigenvalueSequence::power(Real(1), Real(1), 4);
  const auto truth = dirichlet_evaluator(CoefficientSequence(Vector{Real(1)}), seq);
  Vector times;
  for (int i = 0; i <= 100; ++i) times.push_back(Real(i) / 100);
  const SeriesInput in(sample(truth, times, Real(1), Real(0), NoiseNorm::sup, 0));
  CHECK(in.is_sample());
  CHECK(in.has_exact(Real(0.25)));
  CHECK(!in.has_exact(Real(0.255)));
  CHECK(in(Real(0.25)) == truth(Real(0.25)));
  CHECK(abs(in(Real(0.255)) - truth(Real(0.255))) < 1e-6);
  CHECK(abs(in.max_spacing() - Real(0.01)) < 1e-15);
  const SeriesInput ev(truth, Real("1e-4"));
  CHECK(!ev.is_sample());
  CHECK(ev.noise_level() == Real("1e-4"));
}

TEST_CASE("declared regularity ball is enforced") {
  InitialDatum f = datum({Real(1), Real(1)});
  f.regularity = Regularity{Real(1), Real(1)};
  CHECK_THROWS(f.check());
  f.regularity = Regularity{Real(1), Real(10)};
  CHECK_NOTHROW(f.check());
  f.mu = 0;
  CHECK_THROWS(f.check());
}
