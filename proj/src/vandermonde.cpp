// SPDX-License-Identifier: Apache-2.0
#include "dsr/vandermonde.hpp"

#include <chrono>
#include <cmath>
#include <vector>

#include "dsr/error.hpp"
#include "dsr/stats.hpp"

namespace dsr {

namespace {

Real product_sum(const Vector& x, bool own_node) {
  Real total = 0;
  for (size_t j = 0; j < x.size(); ++j) {
    Real p = 1;
    for (size_t i = 0; i < x.size(); ++i) {
      if (i == j) continue;
      p *= (1 + abs(own_node ? x[j] : x[i])) / abs(x[i] - x[j]);
    }
    total += p;
  }
  return total;
}

double logaddexp(double a, double b) {
  const double m = std::max(a, b);
  if (m == -HUGE_VAL) return m;
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

Real inv_norm_bound(const Vector& nodes) { return product_sum(nodes, false); }
Real inv_norm_bound_alt(const Vector& nodes) { return product_sum(nodes, true); }

VandermondeSystem build_system(const EigenvalueSequence& lambda, size_t N, const SeriesInput& F, const Real& tau) {
  require(N >= 1 && N <= lambda.size(), Errc::invalid_argument, "build_system: N out of range");
  require(tau > 0, Errc::invalid_argument, "build_system: tau must be positive");
  VandermondeSystem sys;
  sys.tau = tau;
  for (size_t n = 1; n <= N; ++n) sys.nodes.push_back(exp(-tau * lambda.at(n)));
  for (size_t j = 0; j < N; ++j) {
    Real t = tau * Real(static_cast<long>(j));
    require(F.has_exact(t), Errc::invalid_argument, "missing sample at t = " + t.str(10));
    sys.rhs.push_back(F(t));
  }
  sys.inv_norm_bound = inv_norm_bound(sys.nodes);
  return sys;
}

PrimalSolution solve_primal(const VandermondeSystem& sys) {
  const size_t n = sys.size();
  require(n >= 1 && sys.rhs.size() == n, Errc::invalid_argument, "solve_primal: malformed system");
  const Vector& x = sys.nodes;
  const Real tol = ldexp(Real(1), 8 - precision_bits());
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (!(abs(x[i] - x[j]) > tol * max(abs(x[i]), abs(x[j]))))
        fail(Errc::ill_conditioned, "Vandermonde nodes " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                        " collide at the working precision");
  Vector b = sys.rhs;
  for (size_t k = 0; k + 1 < n; ++k)
    for (size_t i = n - 1; i >= k + 1; --i) b[i] -= x[k] * b[i - 1];
  for (size_t k = n - 1; k-- > 0;) {
    for (size_t i = k + 1; i < n; ++i) b[i] /= x[i] - x[i - k - 1];
    for (size_t i = k; i + 1 < n; ++i) b[i] -= b[i + 1];
  }
  PrimalSolution out;
  out.residual = 0;
  for (size_t j = 0; j < n; ++j) {
    Real s = 0;
    for (size_t i = 0; i < n; ++i) s += pow(x[i], static_cast<long>(j)) * b[i];
    out.residual = max(out.residual, abs(s - sys.rhs[j]));
  }
  out.a = CoefficientSequence(std::move(b));
  return out;
}

size_t select_N_holder(const Real& epsilon, double C, double c, double beta1, double beta, double m, size_t n0,
                       size_t n_max) {
  require(epsilon > 0 && m > 0, Errc::invalid_argument, "select_N_holder needs epsilon, m > 0");
  require(beta > beta1, Errc::invalid_argument, "select_N_holder needs beta > beta1");
  require(n0 >= 1 && n_max >= n0, Errc::invalid_argument, "select_N_holder: empty range");
  const double le = log(epsilon / Real(m)).to_double();
  size_t best = n0;
  double best_v = HUGE_VAL;
  for (size_t N = n0; N <= n_max; ++N) {
    const double n = static_cast<double>(N);
    const double v = logaddexp(C * std::pow(n, beta1) + le, -c * std::pow(n, beta));
    if (v < best_v) {
      best_v = v;
      best = N;
    }
  }
  return best;
}

RecoveryReport recover_holder(const SeriesInput& F, const EigenvalueSequence& lambda, double m, double alpha_w,
                              double beta_w, const HolderConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const int bits = config.precision_bits > 0 ? config.precision_bits : precision_bits();
  PrecisionScope scope(bits);
  require(m > 0 && alpha_w > 0 && beta_w > 0, Errc::invalid_argument, "recover_holder needs m, alpha, beta > 0");
  require(lambda.gap().has_value(), Errc::refused, "vandermonde route needs declared gap parameters");
  const double beta1 = lambda.gap()->beta1.to_double();
  require(beta_w > beta1, Errc::refused, "a priori decay exponent must exceed the growth exponent beta1");

  size_t n_hi = config.N.value_or(std::min(config.N_max, lambda.size()));
  require(n_hi >= 1 && n_hi <= lambda.size(), Errc::invalid_argument, "recover_holder: N out of range");
  {
    GapReport g = validate_gap(lambda, std::max<size_t>(n_hi, 1));
    require(g.pass, Errc::refused, "gap condition fails on the first " + std::to_string(n_hi) + " exponents");
  }
  const Real mm(m);
  const Real eps = config.noise_level.value_or(F.noise_level());
  const Real eps_eff = max(eps, ldexp(mm, 8 - bits));

  auto tail = [&](size_t N) {
    if (config.support_bound && N >= *config.support_bound) return Real(0);
    return mm * exp(-Real(alpha_w) * pow(Real(static_cast<long>(N + 1)), Real(beta_w)));
  };
  auto nodes_upto = [&](size_t N) {
    Vector x;
    for (size_t n = 1; n <= N; ++n) x.push_back(exp(-config.tau * lambda.at(n)));
    return x;
  };

  RecoveryReport rep;
  rep.method = Method::vandermonde;
  size_t N = n_hi;
  std::vector<double> fit_x, fit_y;
  if (!config.N) {
    Real best;
    bool first = true;
    for (size_t n = 1; n <= n_hi; ++n) {
      Real ib = inv_norm_bound(nodes_upto(n));
      fit_x.push_back(std::pow(static_cast<double>(n), beta1));
      fit_y.push_back(log(ib).to_double());
      Real obj = ib * (eps_eff + tail(n)) + tail(n);
      if (first || obj < best) {
        best = obj;
        N = n;
        first = false;
      }
    }
    rep.diagnostics["objective"] = best;
    if (eps > 0 && eps < mm) rep.diagnostics["gamma"] = log(best / mm) / log(eps / mm);
    if (fit_x.size() >= 2) {
      LinearFit f = linear_fit(fit_x, fit_y);
      rep.diagnostics["inv_norm_C"] = Real(f.slope);
      rep.diagnostics["inv_norm_fit_r2"] = Real(f.r2);
    }
  }

  VandermondeSystem sys = build_system(lambda, N, F, config.tau);
  PrimalSolution sol = solve_primal(sys);
  const Real t_n = tail(N);
  rep.certified_bound = sys.inv_norm_bound * (eps_eff + t_n) + t_n;

  Real a1 = norm(sol.a, NormKind::L1());
  Real binf = max_abs(sys.rhs);
  Real allowed = sys.inv_norm_bound * binf;
  rep.diagnostics["bound_ratio"] = allowed.is_zero() ? Real(0) : a1 / allowed;
  if (a1 > allowed * (1 + ldexp(Real(1), 16 - bits))) rep.notes["bound_violation"] = "||A||_1 exceeds inverse-norm bound";
  rep.diagnostics["inv_norm_bound"] = sys.inv_norm_bound;
  rep.diagnostics["inv_norm_bound_alt"] = inv_norm_bound_alt(sys.nodes);
  rep.diagnostics["residual"] = sol.residual;
  rep.diagnostics["epsilon"] = eps;
  if (eps > 0 && eps < 1) {
    Real gamma = rep.diagnostics.count("gamma") ? rep.diagnostics["gamma"] : Real(0);
    Real rate = pow(eps, gamma) + eps;
    rep.diagnostics["theorem_rate"] = rate;
    if (config.theorem_C) rep.diagnostics["theorem_bound"] = Real(*config.theorem_C) * rate;
  }
  rep.estimate = std::move(sol.a);
  rep.truncation = N;
  rep.notes["certified_bound"] = "inverse-norm bound times (noise + tail) plus the unrecovered tail, l1";
  rep.timings["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace dsr
