// SPDX-License-Identifier: Apache-2.0
#include "dsr/biortho.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "dsr/error.hpp"

namespace dsr {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Real residual_against(const Matrix& combo, const Matrix& G) {
  Matrix P = combo * G;
  Real r = 0;
  for (size_t i = 0; i < P.rows(); ++i)
    for (size_t j = 0; j < P.cols(); ++j) r = max(r, abs(P(i, j) - (i == j ? 1 : 0)));
  return r;
}

Real inf_norm(const Matrix& a) {
  Real m = 0;
  for (size_t i = 0; i < a.rows(); ++i) {
    Real s = 0;
    for (size_t j = 0; j < a.cols(); ++j) s += abs(a(i, j));
    m = max(m, s);
  }
  return m;
}

}  // namespace

Real BiorthoFamily::psi(size_t n, const Real& t) const {
  require(n >= 1 && n <= N, Errc::invalid_argument, "psi index out of range");
  Real s = 0;
  for (size_t k = 0; k < N; ++k) s += combo(n - 1, k) * exp(-lambda.values()[k] * t);
  return s;
}

Matrix gram_matrix(const EigenvalueSequence& lambda, const Real& T, size_t N) {
  require(N >= 1 && N <= lambda.size(), Errc::invalid_argument, "gram_matrix: N out of range");
  require(T > 0, Errc::invalid_argument, "gram_matrix: T must be positive");
  Matrix G(N, N);
  for (size_t j = 0; j < N; ++j)
    for (size_t k = j; k < N; ++k) {
      Real s = lambda.values()[j] + lambda.values()[k];
      G(j, k) = T.is_finite() ? -expm1(-s * T) / s : 1 / s;
      if (k != j) G(k, j) = G(j, k);
    }
  return G;
}

Real biorthogonality_residual(const BiorthoFamily& fam) {
  PrecisionScope hi(2 * fam.precision_bits);
  return residual_against(fam.combo, gram_matrix(fam.lambda, fam.T, fam.N)).rounded(fam.precision_bits);
}

BiorthoFamily build_family(const EigenvalueSequence& lambda, const Real& T, size_t N, int precision_bits) {
  require(N >= 1 && N <= lambda.size(), Errc::invalid_argument, "build_family: N out of range");
  require(precision_bits >= 16, Errc::invalid_argument, "build_family: precision too small");
  BiorthoFamily fam;
  fam.N = N;
  fam.lambda = lambda.prefix(N);
  fam.precision_bits = precision_bits;
  fam.summable = reciprocal_sum_class(lambda) != ReciprocalClass::divergent;
  const int hi_bits = 2 * precision_bits;
  {
    PrecisionScope hi(hi_bits);
    fam.T = T.rounded(precision_bits);
    Matrix G = gram_matrix(fam.lambda, fam.T, N);
    Matrix L;
    try {
      L = cholesky(G);
    } catch (const Error&) {
      fail(Errc::precision, "Gram matrix of size " + std::to_string(N) + " is not positive definite at " +
                                std::to_string(hi_bits) + " bits; more than " + std::to_string(precision_bits) +
                                " working bits are required");
    }
    Matrix I = Matrix::identity(N);
    Matrix C = cholesky_solve(L, I);
    Real best = residual_against(C, G);
    for (int it = 0; it < 3; ++it) {
      Matrix R = G * C;
      for (size_t i = 0; i < N; ++i)
        for (size_t j = 0; j < N; ++j) R(i, j) = (i == j ? Real(1) : Real(0)) - R(i, j);
      Matrix D = C * R;
      Matrix Cn = C;
      for (size_t i = 0; i < N; ++i)
        for (size_t j = 0; j < N; ++j) Cn(i, j) += D(i, j);
      Real r = residual_against(Cn, G);
      if (!(r < best)) break;
      best = r;
      C = std::move(Cn);
    }
    for (size_t n = 0; n < N; ++n) fam.psi_norms.push_back(sqrt(C(n, n)).rounded(precision_bits));
    fam.combo = C.rounded(precision_bits);
    fam.residual = residual_against(fam.combo, G).rounded(precision_bits);
  }
  const Real target = ldexp(Real(1), -precision_bits / 4);
  if (fam.residual > target) {
    double lr = std::log2(fam.residual.to_double());
    int need = static_cast<int>(std::ceil(4.0 / 3.0 * (precision_bits + lr))) + 16;
    fail(Errc::precision, "biorthogonal family of size " + std::to_string(N) + " is ill-conditioned at " +
                              std::to_string(precision_bits) + " bits (residual " + fam.residual.str(4) +
                              " > 2^-" + std::to_string(precision_bits / 4) + "); about " + std::to_string(need) +
                              " bits required");
  }
  return fam;
}

QuadratureRule extraction_rule(const BiorthoFamily& fam, int quadrature_order) {
  require(fam.T.is_finite(), Errc::invalid_argument, "extraction needs a finite horizon");
  return graded_rule(fam.T, 2 * fam.lambda.values().back(), quadrature_order);
}

CoefficientSequence extract_coefficients(const SeriesInput& F, const BiorthoFamily& fam, int quadrature_order) {
  QuadratureRule rule = extraction_rule(fam, quadrature_order);
  if (F.is_sample()) {
    bool exact = true;
    for (const auto& t : rule.nodes) exact = exact && F.has_exact(t);
    if (!exact) {
      const auto& s = F.sample();
      const Real limit = fam.T / (4 * static_cast<long>(rule.size()));
      require(s.times.front() <= rule.nodes.front() && s.times.back() >= rule.nodes.back(),
              Errc::interpolation, "sample does not cover the quadrature nodes");
      require(F.max_spacing() <= limit, Errc::interpolation,
              "sample spacing " + F.max_spacing().str(4) + " exceeds T/(4M) = " + limit.str(4) +
                  " for M = " + std::to_string(rule.size()) + " quadrature nodes");
    }
  }
  const size_t N = fam.N;
  Vector moments(N);
  for (size_t j = 0; j < rule.size(); ++j) {
    Real wf = rule.weights[j] * F(rule.nodes[j]);
    if (wf.is_zero()) continue;
    for (size_t k = 0; k < N; ++k) moments[k] += wf * exp(-fam.lambda.values()[k] * rule.nodes[j]);
  }
  return CoefficientSequence(fam.combo * moments);
}

size_t select_truncation(const Real& epsilon, double C, double theta, double m, size_t n_max) {
  require(epsilon > 0, Errc::invalid_argument, "select_truncation needs epsilon > 0");
  require(m > 0, Errc::invalid_argument, "select_truncation needs m > 0");
  const double le = log(epsilon / Real(m)).to_double();
  size_t best = 1;
  for (size_t N = 1; N <= n_max; ++N) {
    const double n = static_cast<double>(N);
    if (C * n + 2 * le <= -2 * theta * std::log(n))
      best = N;
    else if (C >= 0)
      break;
  }
  return best;
}

double truncation_constant(const BiorthoFamily& fam) {
  double best = -HUGE_VAL;
  Real s = 0;
  for (size_t n = 0; n < fam.N; ++n) {
    s += fam.psi_norms[n] * fam.psi_norms[n];
    best = std::max(best, log(s).to_double() / static_cast<double>(n + 1));
  }
  return best;
}

double psi_growth_constant(const BiorthoFamily& fam, double beta) {
  double best = -HUGE_VAL;
  for (size_t n = 0; n < fam.N; ++n)
    best = std::max(best, log(fam.psi_norms[n]).to_double() / pow(fam.lambda.values()[n], Real(1.0 / beta)).to_double());
  return best;
}

std::vector<Interval> default_measurement_set(const Real& T) { return {{T / 4, 3 * T / 4}}; }

Real restriction_constant(const EigenvalueSequence& lambda, const Real& T, const std::vector<Interval>& B, size_t N,
                          size_t draws, uint64_t seed, size_t grid) {
  require(N >= 1 && N <= lambda.size(), Errc::invalid_argument, "restriction_constant: N out of range");
  require(!B.empty() && T.is_finite() && grid >= 2, Errc::invalid_argument, "restriction_constant: bad arguments");
  auto table = [&](const Real& lo, const Real& hi) {
    std::vector<Vector> rows;
    for (size_t i = 0; i < grid; ++i) {
      Real t = lo + (hi - lo) * Real(i) / Real(grid - 1);
      Vector e(N);
      for (size_t k = 0; k < N; ++k) e[k] = exp(-lambda.values()[k] * t);
      rows.push_back(std::move(e));
    }
    return rows;
  };
  auto full = table(Real(0), T);
  std::vector<Vector> sub;
  for (const auto& iv : B) {
    require(iv.lo >= 0 && iv.hi <= T && iv.hi > iv.lo, Errc::invalid_argument, "measurement interval outside (0,T)");
    for (auto& r : table(iv.lo, iv.hi)) sub.push_back(std::move(r));
  }
  auto sup = [&](const std::vector<Vector>& rows, const Vector& a) {
    Real m = 0;
    for (const auto& e : rows) {
      Real s = 0;
      for (size_t k = 0; k < N; ++k) s += a[k] * e[k];
      m = max(m, abs(s));
    }
    return m;
  };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Real best = 1;
  for (size_t d = 0; d < draws; ++d) {
    Vector a(N);
    Real nn = 0;
    for (auto& x : a) {
      x = Real(g(rng));
      nn += x * x;
    }
    nn = sqrt(nn);
    for (auto& x : a) x /= nn;
    Real den = sup(sub, a);
    if (den.is_zero()) continue;
    best = max(best, sup(full, a) / den);
  }
  return best;
}

RecoveryReport recover_log(const SeriesInput& F, const EigenvalueSequence& lambda, const Real& T, double theta,
                           double m, const BiorthoConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const int bits = config.precision_bits > 0 ? config.precision_bits : precision_bits();
  PrecisionScope scope(bits);
  require(theta > 0 && m > 0, Errc::invalid_argument, "recover_log needs theta > 0 and m > 0");
  const ReciprocalClass cls = reciprocal_sum_class(lambda);
  require(cls != ReciprocalClass::divergent, Errc::refused,
          "biorthogonal route needs a summable reciprocal exponent series; use peeling or vandermonde");
  const size_t section = config.section_size.value_or(std::min<size_t>(lambda.size(), 24));
  require(section >= 1 && section <= lambda.size(), Errc::invalid_argument, "section size exceeds the exponent list");

  RecoveryReport rep;
  rep.method = Method::biortho;
  if (cls == ReciprocalClass::unknown) rep.notes["warning"] = "reciprocal exponent series not classified";

  BiorthoFamily fam = build_family(lambda, T, section, bits);
  rep.timings["family"] = seconds_since(t0);
  const double C = config.truncation_C.value_or(truncation_constant(fam));
  double beta = 1;
  if (lambda.asymptotic()) beta = lambda.asymptotic()->beta.to_double();

  Real eps = config.noise_level.value_or(F.noise_level());
  const Real eps_l2 = F.noise_norm() == NoiseNorm::sup ? eps * sqrt(T) : eps;
  size_t Nt = section;
  if (eps > 0) Nt = std::min(section, select_truncation(eps_l2, C, theta, m));

  const auto t1 = std::chrono::steady_clock::now();
  CoefficientSequence ahat = extract_coefficients(F, fam, config.quadrature_order).truncated(Nt);
  rep.timings["extract"] = seconds_since(t1);

  Real psi2 = 0;
  for (size_t n = 0; n < Nt; ++n) psi2 += fam.psi_norms[n] * fam.psi_norms[n];
  rep.certified_bound = eps_l2 * sqrt(psi2) + Real(m) * pow(japanese_bracket(Nt + 1), Real(-theta));

  // sup of |F| over the measurement set, read on the data grid
  const auto B = config.B.value_or(default_measurement_set(T));
  Real supB = 0;
  for (const auto& iv : B) {
    if (F.is_sample()) {
      for (size_t j = 0; j < F.sample().times.size(); ++j) {
        const Real& t = F.sample().times[j];
        if (t >= iv.lo && t <= iv.hi) supB = max(supB, abs(F.sample().values[j]));
      }
    } else {
      for (int i = 0; i <= 64; ++i) supB = max(supB, abs(F(iv.lo + (iv.hi - iv.lo) * Real(i) / Real(64))));
    }
  }
  if (eps > 0) {
    Real rate = pow(abs(log(eps)), Real(-theta)) + eps;
    rep.diagnostics["theorem_rate"] = rate;
    if (config.theorem_C) rep.diagnostics["theorem_bound"] = Real(*config.theorem_C) * rate;
  }

  rep.estimate = std::move(ahat);
  rep.truncation = Nt;
  rep.diagnostics["epsilon"] = eps;
  rep.diagnostics["sup_F_on_B"] = supB;
  rep.diagnostics["section_size"] = Real(static_cast<long>(section));
  rep.diagnostics["truncation_C"] = Real(C);
  rep.diagnostics["psi_growth_C"] = Real(psi_growth_constant(fam, beta));
  rep.diagnostics["family_residual"] = fam.residual;
  rep.diagnostics["psi_norm_max"] = fam.psi_norms.back();
  {
    PrecisionScope hi(2 * bits);
    Matrix G = gram_matrix(fam.lambda, fam.T, fam.N);
    rep.diagnostics["gram_condition"] = (inf_norm(G) * inf_norm(fam.combo)).rounded(bits);
  }
  rep.notes["certified_bound"] = "noise term from psi norms plus h^theta tail; assumes data modes within the section";
  rep.timings["total"] = seconds_since(t0);
  return rep;
}

std::vector<Real> no_holder_ratios(const EigenvalueSequence& lambda, const Real& T, double theta, size_t kmax) {
  require(kmax >= 1 && kmax <= lambda.size(), Errc::invalid_argument, "no_holder_ratios: kmax out of range");
  std::vector<Real> out;
  for (size_t k = 1; k <= kmax; ++k) {
    const Real amp = pow(japanese_bracket(k), Real(-theta));
    const Real& lk = lambda.at(k);
    QuadratureRule rule = graded_rule(T, 2 * lk, 32);
    Real l2 = 0;
    for (size_t j = 0; j < rule.size(); ++j) {
      Real v = amp * exp(-lk * rule.nodes[j]);
      l2 += rule.weights[j] * v * v;
    }
    out.push_back(amp / sqrt(l2));
  }
  return out;
}

}  // namespace dsr
