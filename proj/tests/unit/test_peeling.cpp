#include <doctest.h>

#include <cmath>
#include <random>

#include "dsr/error.hpp"
#include "dsr/peeling.hpp"
#include "oracles.hpp"

using namespace dsr;

TEST_CASE("peeling products and chain constants") {
  PrecisionScope s(256);
  const auto seq = EigenvalueSequence::power(Real(0.5), Real(1), 8);  // lambda_k = k
  const Vector p = peeling_products(seq, 5);
  Real ref = 1;
  for (long k = 1; k <= 5; ++k) {
    ref *= Real(1) / Real(k + 1);  // 1 - k/(k+1)
    CHECK(abs(p[k - 1] - ref) < 1e-70);
  }
  const auto c = chain_constants(4);
  CHECK(c == std::vector<double>{2, 8, 26, 80});
  CHECK_THROWS(peeling_products(seq, 8));
}

TEST_CASE("a single peel step is exact on one-term data") {
  PrecisionScope s(256);
  const auto seq = EigenvalueSequence::power(Real(1), Real(1), 4);
  const SeriesEvaluator F = [&](const Real& t) { return Real(0.3) * exp(-t) - Real(0.2) * exp(-4 * t); };
  const PeelStep s1 = peel_step(F, {}, 1, seq, Real("1e-6"), Real(100));
  CHECK(abs(s1.s - log(Real("1e6")) / 4) < 1e-70);
  // error of the first estimate is the rescaled second mode
  CHECK(abs(s1.estimate - (Real(0.3) - Real(0.2) * exp(-3 * s1.s))) < 1e-70);
  const PeelStep s2 = peel_step(F, {Real(0.3)}, 2, seq, Real(2), Real(100));
  CHECK(s2.s == 0);
  CHECK(abs(s2.estimate + Real(0.2)) < 1e-70);
}

TEST_CASE("k tilde is the largest admissible k") {
  const double theta = 1, beta = 2, c = 0.5;
  for (double rho : {1e-30, 1e-100, 1e-300}) {
    const KTilde kt = select_k_tilde(Real(rho), theta, beta, c);
    size_t ref = 0;
    for (size_t k = 1; k < 50; ++k) {
      const double q = std::pow(c, k) / std::pow(k + 1.0, beta * k);
      if (k * std::log(3.0) + q * std::log(rho) <= -theta * std::log(static_cast<double>(k)))
        ref = k;
      else
        break;
    }
    CHECK(kt.k == ref);
  }
  CHECK(select_k_tilde(Real(0.9), theta, beta, c).fallback);
  CHECK(rho_zero(beta, c) == doctest::Approx(std::pow(3.0, -8.0)));
}

TEST_CASE("noiseless peeling recovers a short series") {
  PrecisionScope s(256);
  const auto seq = EigenvalueSequence::power(Real(1), Real(1), 16);
  const Vector a{Real(0.4), Real(-0.3), Real(0.2), Real(0.1)};
  PeelingConfig cfg;
  cfg.modes = 4;
  cfg.support_bound = 4;
  PeelingTrace tr;
  const auto rep =
      recover_peeling(SeriesInput(dirichlet_evaluator(CoefficientSequence(a), seq)), seq, 1, 2, cfg, &tr);
  CHECK(rep.truncation == 4);
  CHECK(oracle::rel_l2(rep.estimate.entries(), a) < 1e-8);
  CHECK(tr.internal_bits >= 256);
  CHECK(tr.sample_times.size() == 4);
  CHECK(tr.sample_times.back() == 0);
  REQUIRE(rep.certified_bound.has_value());
  CHECK(norm(rep.estimate - CoefficientSequence(a), NormKind::L1()) <= *rep.certified_bound);
  const std::string csv = trace_to_csv(tr);
  CHECK(csv.rfind("k,s_k,a_k,bound_k\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("noisy peeling error is within the certified l1 bound") {
  PrecisionScope s(256);
  const auto seq = EigenvalueSequence::power(Real(0.5), Real(1), 16);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector a = oracle::random_coefficients(rng, 3);
    const double m = norm(CoefficientSequence(a), NormKind::L1Theta(Real(1))).to_double();
    const auto truth = dirichlet_evaluator(CoefficientSequence(a), seq);
    const Real eps("1e-12");
    const SeriesInput F([&](const Real& t) { return truth(t) + eps * sin(3 * t); }, eps);
    PeelingConfig cfg;
    cfg.modes = 2;
    const auto rep = recover_peeling(F, seq, 1, m, cfg);
    CHECK(norm(rep.estimate - CoefficientSequence(a).truncated(2), NormKind::L1()) <= *rep.certified_bound);
  }
}

TEST_CASE("peeling refuses sequences without gap parameters") {
  const auto seq = EigenvalueSequence::explicit_values({Real(1), Real(2), Real(4)});
  try {
    recover_peeling(SeriesInput(dirichlet_evaluator(CoefficientSequence::unit(1), seq)), seq, 1, 1);
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::refused);
  }
}

TEST_CASE("large residual scale falls back to the linear bound") {
  const auto seq = EigenvalueSequence::power(Real(1), Real(1), 8);
  const SeriesInput F(dirichlet_evaluator(CoefficientSequence::unit(1), seq), Real(0.5));
  const auto rep = recover_peeling(F, seq, 1, 1);
  CHECK(rep.truncation == 0);
  CHECK(rep.notes.count("fallback") == 1);
}
