// SPDX-License-Identifier: Apache-2.0
#include "dsr/peeling.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "dsr/error.hpp"

namespace dsr {

namespace {

double logaddexp(double a, double b) {
  if (a == -HUGE_VAL) return b;
  if (b == -HUGE_VAL) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

struct ChainPlan {
  size_t k = 0;
  std::optional<size_t> support;
  double theta = 1;
};

double tail_mass(size_t k, double theta) { return std::pow(static_cast<double>(k + 1), -theta); }

bool tail_free(const ChainPlan& p, size_t k) { return p.support && k >= *p.support; }

// log of the certified chain total (without the a priori tail) at a given internal precision
double simulate_chain(const ChainPlan& plan, const std::vector<double>& lam, double log_rho1, double s_max) {
  double log_sum = -HUGE_VAL;
  for (size_t k = 1; k <= plan.k; ++k) {
    const double lrk = logaddexp(log_rho1, log_sum);
    double lb;
    if (tail_free(plan, k)) {
      lb = lrk;
    } else {
      const double s = lrk >= 0 ? 0.0 : std::min(-lrk / lam[k], s_max);
      lb = logaddexp(lam[k - 1] * s + lrk, -(lam[k] - lam[k - 1]) * s + std::log(tail_mass(k, plan.theta)));
    }
    log_sum = logaddexp(log_sum, lb);
  }
  return log_sum;
}

}  // namespace

PeelStep peel_step(const SeriesEvaluator& F, const Vector& partial, size_t k, const EigenvalueSequence& lambda,
                   const Real& rho_k, const Real& s_max) {
  require(k >= 1 && partial.size() + 1 >= k, Errc::invalid_argument, "peel_step: missing earlier estimates");
  require(k + 1 <= lambda.size(), Errc::invalid_argument, "peel_step needs lambda_{k+1}");
  require(lambda.at(k + 1) > lambda.at(k), Errc::structural, "peel_step needs lambda_{k+1} > lambda_k");
  PeelStep st;
  if (rho_k >= 1 || !(rho_k > 0))
    st.s = 0;
  else
    st.s = min(log(1 / rho_k) / lambda.at(k + 1), s_max);
  Real r = F(st.s);
  for (size_t i = 1; i < k; ++i) r -= partial[i - 1] * exp(-lambda.at(i) * st.s);
  st.estimate = r * exp(lambda.at(k) * st.s);
  return st;
}

Vector peeling_products(const EigenvalueSequence& lambda, size_t kmax) {
  require(kmax + 1 <= lambda.size(), Errc::invalid_argument, "peeling_products needs kmax + 1 exponents");
  Vector p;
  Real acc = 1;
  for (size_t k = 1; k <= kmax; ++k) {
    acc *= 1 - lambda.at(k) / lambda.at(k + 1);
    p.push_back(acc);
  }
  return p;
}

std::vector<double> chain_constants(size_t kmax) {
  std::vector<double> c;
  double v = 2;
  for (size_t k = 1; k <= kmax; ++k) {
    c.push_back(v);
    v = 3 * v + 2;
  }
  return c;
}

double rho_zero(double beta, double c_star) {
  const double q1 = c_star / std::pow(2.0, beta);
  return std::pow(3.0, -1.0 / q1);
}

KTilde select_k_tilde(const Real& rho, double theta, double beta, double c_star) {
  require(theta > 0 && beta > 0 && c_star > 0 && c_star <= 1, Errc::invalid_argument,
          "select_k_tilde needs theta, beta > 0 and c_* in (0, 1]");
  require(rho > 0, Errc::invalid_argument, "select_k_tilde needs rho > 0");
  KTilde out;
  const double lr = log(rho).to_double();
  if (lr >= std::log(rho_zero(beta, c_star))) {
    out.fallback = true;
    return out;
  }
  for (size_t k = 1; k < 100000; ++k) {
    const double kk = static_cast<double>(k);
    const double lq = kk * std::log(c_star) - beta * kk * std::log(kk + 1);
    const double q = std::exp(lq);
    if (kk * std::log(3.0) + q * lr <= -theta * std::log(kk))
      out.k = k;
    else
      break;
  }
  if (out.k == 0) out.fallback = true;
  return out;
}

RecoveryReport recover_peeling(const SeriesInput& F, const EigenvalueSequence& lambda, double theta, double m,
                               const PeelingConfig& config, PeelingTrace* trace_out) {
  const auto t0 = std::chrono::steady_clock::now();
  const int bits = config.precision_bits > 0 ? config.precision_bits : precision_bits();
  PrecisionScope scope(bits);
  require(theta > 0 && m > 0, Errc::invalid_argument, "recover_peeling needs theta > 0 and m > 0");
  require(lambda.gap().has_value(), Errc::refused, "peeling needs declared gap parameters");
  const GapParams& gp = *lambda.gap();
  const double beta = (gp.beta0 + gp.beta1).to_double();
  const double c_star = std::min((gp.d / gp.c).to_double(), 1.0);

  const Real mm(m);
  const Real lambda1 = lambda.at(1);
  const Real ln2 = log(Real(2));

  PeelingTrace tr;
  tr.rho = 0;
  {
    const Real s_max = Real(bits) * ln2 / lambda1;
    const size_t n = std::max<size_t>(config.sup_grid, 2);
    for (size_t i = 0; i < n; ++i) {
      Real x = Real(static_cast<long>(i)) / Real(static_cast<long>(n - 1));
      Real t = s_max * x * x;
      if (F.is_sample() && t > F.sample().times.back()) break;
      tr.rho = max(tr.rho, abs(F(t)) / mm);
    }
  }

  const Real noise = F.noise_level() / mm;
  const Real floor_bits_scale = ldexp(Real(1), 8 - bits);
  Real rho1 = max(noise, floor_bits_scale);

  RecoveryReport rep;
  rep.method = Method::peeling;
  KTilde kt;
  if (config.modes) {
    kt.k = *config.modes;
  } else {
    kt = select_k_tilde(rho1, theta, beta, c_star);
  }
  rep.diagnostics["rho_sup"] = tr.rho;
  rep.diagnostics["rho_zero"] = Real(rho_zero(beta, c_star));
  rep.diagnostics["c_star"] = Real(c_star);
  rep.diagnostics["beta"] = Real(beta);
  if (kt.fallback || kt.k == 0) {
    rep.truncation = 0;
    rep.certified_bound = tr.rho * mm / Real(rho_zero(beta, c_star));
    rep.notes["fallback"] = "residual scale at or above rho_0; linear fallback bound reported";
    if (trace_out) *trace_out = tr;
    return rep;
  }
  const size_t K = kt.k;
  const bool last_free = config.support_bound && *config.support_bound <= K;
  require(last_free || K + 1 <= lambda.size(), Errc::invalid_argument,
          "peeling " + std::to_string(K) + " modes needs " + std::to_string(K + 1) + " exponents");
  const size_t check_upto = std::min(lambda.size(), K + 1);
  if (check_upto >= 2) {
    GapReport g = validate_gap(lambda, check_upto);
    require(g.pass, Errc::refused,
            "gap condition fails on the first " + std::to_string(check_upto) + " exponents (d* = " + g.d_star.str(6) +
                ", c* = " + g.c_star.str(6) + ")");
  }

  ChainPlan plan{K, config.support_bound, theta};
  std::vector<double> lam;
  for (size_t k = 1; k <= std::min(lambda.size(), K + 1); ++k) lam.push_back(lambda.at(k).to_double());
  if (lam.size() < K + 1) lam.push_back(lam.back() * 2);

  int ibits = config.internal_bits > 0 ? config.internal_bits : bits;
  if (config.internal_bits == 0 && !F.is_sample() && noise < floor_bits_scale) {
    auto total = [&](int b) {
      const double lr = (8.0 - b) * std::log(2.0);
      return simulate_chain(plan, lam, lr, b * std::log(2.0) / lam[0]);
    };
    const double goal = std::log(config.target);
    if (total(ibits) > goal) {
      int hi = ibits;
      while (hi < config.max_internal_bits && total(hi) > goal) hi = std::min(2 * hi, config.max_internal_bits);
      int lo = hi / 2 < ibits ? ibits : hi / 2;
      while (hi - lo > 64) {
        int mid = (lo + hi) / 2;
        if (total(mid) > goal)
          lo = mid;
        else
          hi = mid;
      }
      ibits = hi;
      if (total(ibits) > goal) rep.notes["precision"] = "automatic precision capped before reaching the target";
    }
  }
  tr.internal_bits = ibits;

  Vector est;
  Real sum_b = 0;
  {
    PrecisionScope inner(ibits);
    const Real s_max = Real(ibits) * ln2 / lambda1;
    if (ibits > bits) rho1 = max(noise, ldexp(Real(1), 8 - ibits));
    SeriesEvaluator G = [&](const Real& t) { return F(t) / mm; };
    Vector p = peeling_products(lambda, std::min(K, lambda.size() - 1));
    for (size_t k = 1; k <= K; ++k) {
      Real rk = rho1 + sum_b;
      Real b;
      PeelStep st;
      if (tail_free(plan, k)) {
        st.s = 0;
        Real r = G(st.s);
        for (size_t i = 1; i < k; ++i) r -= est[i - 1];
        st.estimate = r;
        b = rk;
      } else {
        st = peel_step(G, est, k, lambda, rk, s_max);
        const Real tail = pow(Real(static_cast<long>(k + 1)), Real(-theta));
        b = exp(lambda.at(k) * st.s) * rk + tail * exp(-(lambda.at(k + 1) - lambda.at(k)) * st.s);
      }
      sum_b += b;
      tr.residual_scales.push_back(rk.rounded(bits));
      tr.sample_times.push_back(st.s.rounded(bits));
      tr.step_bounds.push_back(b.rounded(bits));
      est.push_back(st.estimate);
      if (k <= p.size()) {
        tr.products.push_back(p[k - 1].rounded(bits));
        tr.chain_bounds.push_back((pow(Real(3), static_cast<long>(k)) * pow(rk, p[k - 1])).rounded(bits));
      }
    }
  }
  const auto cks = chain_constants(K);
  for (size_t k = 1; k <= tr.products.size(); ++k) {
    const double lq = static_cast<double>(k) * std::log(c_star) - beta * k * std::log(k + 1.0);
    tr.q.push_back(exp(Real(lq)));
    tr.cumulative_bounds.push_back(Real(cks[k - 1]) * pow(rho1, tr.products[k - 1]));
  }
  Vector scaled;
  for (auto& e : est) scaled.push_back((e * mm).rounded(bits));
  tr.estimates = CoefficientSequence(est);
  for (auto& e : tr.estimates.entries()) e = e.rounded(bits);

  Real total = sum_b.rounded(bits);
  if (!last_free) total += pow(Real(static_cast<long>(K + 1)), Real(-theta));
  rep.estimate = CoefficientSequence(std::move(scaled));
  rep.truncation = K;
  rep.certified_bound = total * mm;
  rep.diagnostics["internal_bits"] = Real(ibits);
  rep.diagnostics["rho_1"] = rho1.rounded(bits);
  rep.diagnostics["modes"] = Real(static_cast<long>(K));
  if (noise > 0 && abs(log(noise)) > 1) {
    Real rate = pow(log(abs(log(noise))), Real(-theta / 2)) + noise * mm;
    rep.diagnostics["theorem_rate"] = rate;
    if (config.theorem_C) rep.diagnostics["theorem_bound"] = Real(*config.theorem_C) * rate;
  }
  rep.notes["certified_bound"] = "l1 error bound from the per-step residual chain plus l^{1,theta} tail";
  rep.timings["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (trace_out) {
    tr.m = mm;
    *trace_out = std::move(tr);
  }
  return rep;
}

std::string trace_to_csv(const PeelingTrace& tr) {
  std::ostringstream os;
  os << "k,s_k,a_k,bound_k\n";
  Real cum = 0;
  for (size_t k = 1; k <= tr.estimates.size(); ++k) {
    cum += tr.step_bounds[k - 1];
    os << k << ',' << tr.sample_times[k - 1].str() << ',' << (tr.estimates.at(k) * tr.m).str() << ','
       << (cum * tr.m).str() << '\n';
  }
  return os.str();
}

}  // namespace dsr
