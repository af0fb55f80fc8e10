// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance        run criteria 1..11
//   acceptance 4 6    run the listed criteria
// Exit status is nonzero when any selected criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "dsr/io.hpp"
#include "dsr/lab.hpp"
#include "oracles.hpp"

using namespace dsr;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(double x, int prec = 3) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

std::vector<double> decade_grid(int lo, int hi) {
  std::vector<double> g;
  for (int e = lo; e <= hi; ++e) g.push_back(std::pow(10.0, -e));
  return g;
}

// 1. biorthogonality of the family for k^2 on (0, 1)
void criterion1(Outcome& o) {
  Stopwatch sw;
  const auto lambda = EigenvalueSequence::power(Real(1), Real(1), 10);
  const BiorthoFamily fam = build_family(lambda, Real(1), 10, 512);
  const double build = sw.seconds();
  // closed-form inner products at 1024 bits
  PrecisionScope s(1024);
  Real worst = 0;
  for (size_t n = 0; n < 10; ++n)
    for (size_t m = 0; m < 10; ++m) {
      Real acc = 0;
      for (size_t k = 0; k < 10; ++k)
        acc += fam.combo(n, k) * oracle::exp_inner(lambda.values()[k], lambda.values()[m], Real(1));
      worst = max(worst, abs(acc - (n == m ? 1 : 0)));
    }
  o.detail << "max residual " << worst.str(4) << ", build " << fmt(build) << " s";
  o.require(worst < Real("1e-30"), "residual < 1e-30");
  o.require(build < 10, "runtime < 10 s");
}

// 2. noiseless round trip on every route
void criterion2(Outcome& o) {
  Stopwatch total;
  PrecisionScope s(256);
  const auto squares = EigenvalueSequence::power(Real(1), Real(1), 64);
  const auto linear = EigenvalueSequence::power(Real(0.5), Real(1), 64);
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<size_t> support(1, 8);
  std::map<std::string, double> worst{{"biortho", 0}, {"peeling", 0}, {"vandermonde", 0}};
  std::map<std::string, int> bad;
  for (int c = 0; c < 100; ++c) {
    const Vector a = oracle::random_coefficients(rng, support(rng));
    const size_t n = a.size();
    const CoefficientSequence A(a);
    const double m = norm(A, NormKind::L1Theta(Real(1))).to_double();

    BiorthoConfig bc;
    bc.section_size = 8;
    const auto rb = recover_log(SeriesInput(dirichlet_evaluator(A, squares)), squares, Real(1), 1, m, bc);

    PeelingConfig pc;
    pc.modes = n;
    pc.support_bound = n;
    const auto rp = recover_peeling(SeriesInput(dirichlet_evaluator(A, squares)), squares, 1, m, pc);

    HolderConfig hc;
    hc.support_bound = n;
    hc.N = n;
    const double wsum = norm(A, NormKind::L1Exp(Real(1), Real(2))).to_double();
    const auto rv = recover_holder(SeriesInput(dirichlet_evaluator(A, linear)), linear, wsum, 1, 2, hc);

    for (const auto& [name, rep] : {std::pair{"biortho", &rb}, {"peeling", &rp}, {"vandermonde", &rv}}) {
      const double e = oracle::rel_l2(rep->estimate.entries(), a).to_double();
      worst[name] = std::max(worst[name], e);
      if (!(e < 1e-8)) ++bad[name];
    }
  }
  const double secs = total.seconds();
  o.detail << "worst rel l2: biortho " << fmt(worst["biortho"]) << ", peeling " << fmt(worst["peeling"])
           << ", vandermonde " << fmt(worst["vandermonde"]) << "; 300 cases in " << fmt(secs) << " s";
  for (const auto& [name, k] : bad) o.require(k == 0, name + " cases above 1e-8: " + std::to_string(k));
  o.require(secs < 120, "runtime < 2 min");
}

// 3. the peeling chain inequality at every step
void criterion3(Outcome& o) {
  PrecisionScope s(256);
  const auto lambda = EigenvalueSequence::power(Real(0.5), Real(1), 64);
  std::mt19937_64 rng(77);
  size_t checks = 0, violations = 0;
  double tightest = 0;
  for (int c = 0; c < 100; ++c) {
    const Vector a = oracle::random_coefficients(rng, 6);
    const CoefficientSequence A(a);
    const double m = norm(A, NormKind::L1Theta(Real(1))).to_double();
    const auto truth = dirichlet_evaluator(A, lambda);
    // half noiseless, half with a smooth perturbation of size 10^-(4..12)
    const Real eps = c % 2 ? Real(std::pow(10.0, -(4 + (c / 2) % 9))) : Real(0);
    const SeriesInput F(eps.is_zero() ? truth : SeriesEvaluator([truth, eps](const Real& t) { return truth(t) + eps * sin(3 * t + 1); }),
                        eps);
    PeelingConfig pc;
    pc.modes = 6;
    pc.support_bound = 6;
    PeelingTrace tr;
    recover_peeling(F, lambda, 1, m, pc, &tr);
    Real cum = 0;
    for (size_t k = 1; k <= tr.chain_bounds.size(); ++k) {
      cum += abs(tr.estimates.at(k) - a[k - 1] / Real(m));
      ++checks;
      if (cum > tr.chain_bounds[k - 1]) ++violations;
      if (tr.chain_bounds[k - 1] > 0) tightest = std::max(tightest, (cum / tr.chain_bounds[k - 1]).to_double());
    }
  }
  o.detail << checks << " step checks, " << violations << " violations, max lhs/rhs " << fmt(tightest);
  o.require(checks == 600, "six checks per instance");
  o.require(violations == 0, "zero violations");
}

// 4. inverse-norm bound on solved systems and its growth in N
void criterion4(Outcome& o) {
  PrecisionScope s(768);
  const auto lambda = EigenvalueSequence::power(Real(0.5), Real(1), 64);
  std::mt19937_64 rng(4);
  size_t solved = 0, violations = 0;
  std::vector<double> xs, ys;
  for (size_t N = 1; N <= 20; ++N) {
    for (int rep = 0; rep < 5; ++rep) {
      const Vector a = oracle::random_coefficients(rng, N);
      const auto truth = dirichlet_evaluator(CoefficientSequence(a), lambda);
      const Real eps = rep == 0 ? Real(0) : Real(std::pow(10.0, -2.0 * rep));
      const SeriesInput F([truth, eps](const Real& t) { return truth(t) + eps * cos(2 * t); }, eps);
      const VandermondeSystem sys = build_system(lambda, N, F);
      const PrimalSolution sol = solve_primal(sys);
      ++solved;
      const Real lhs = norm(sol.a, NormKind::L1());
      const Real rhs = sys.inv_norm_bound * max_abs(sys.rhs);
      if (lhs > rhs * (1 + ldexp(Real(1), 16 - precision_bits()))) ++violations;
    }
    Vector nodes;
    for (size_t n = 1; n <= N; ++n) nodes.push_back(exp(-lambda.at(n)));
    xs.push_back(static_cast<double>(N));
    ys.push_back(log(inv_norm_bound(nodes)).to_double());
  }
  const oracle::Ols fit = oracle::ols(xs, ys);
  std::vector<double> xsq;
  for (double x : xs) xsq.push_back(x * x);
  const oracle::Ols vs_sq = oracle::ols(xsq, ys);
  o.detail << solved << " systems, " << violations << " bound violations; log(bound) vs N: slope " << fmt(fit.slope)
           << ", R^2 " << fmt(fit.r2, 4) << " (vs N^2: R^2 " << fmt(vs_sq.r2, 4) << ")";
  o.require(violations == 0, "||A||_1 <= bound * ||B||_inf");
  o.require(fit.r2 > 0.95, "affine in N with R^2 > 0.95");
}

// 5. growth of the biorthogonal norms
void criterion5(Outcome& o) {
  const auto lambda = EigenvalueSequence::power(Real(1), Real(1), 64);
  const BiorthoFamily fam = build_family(lambda, Real(1), 24, 256);
  std::vector<double> xs, ys;
  for (size_t n = 1; n <= 12; ++n) {
    xs.push_back(sqrt(lambda.at(n)).to_double());
    ys.push_back(log(fam.psi_norms[n - 1]).to_double());
  }
  const oracle::Ols fit = oracle::ols(xs, ys);
  o.detail << "log psi_n vs lambda_n^(1/2), n <= 12 of a 24-member family: slope " << fmt(fit.slope) << ", R^2 "
           << fmt(fit.r2, 4);
  o.require(fit.r2 > 0.95, "R^2 > 0.95");
}

ExperimentConfig sweep(Scenario scenario, std::vector<double> grid, size_t trials) {
  ExperimentConfig c;
  c.scenario = scenario;
  c.noise_grid = std::move(grid);
  c.trials = trials;
  c.seed = 0;
  return c;
}

// 6. logarithmic rate of the point inversion
void criterion6(Outcome& o) {
  Stopwatch sw;
  ExperimentConfig c = sweep(Scenario::point_inversion, decade_grid(2, 12), 20);
  c.alpha = 1;
  c.theta = 1;
  c.support = 24;
  const auto recs = run_experiment(c);
  const auto cal = select_seeds(recs, 0, 9), held = select_seeds(recs, 10, 19);
  const RateFit f = fit_rate(held, RateModel::log);
  const double C = calibrate_constant(cal, RateModel::log, 1);
  const auto viol = bound_violations(held, RateModel::log, 1, C);
  size_t failed = 0;
  for (const auto& r : recs) failed += r.status != "ok";
  const double secs = sw.seconds();
  o.detail << "theta_hat " << fmt(f.exponent) << ", R^2 " << fmt(f.r2, 4) << ", C_fit " << fmt(C)
           << ", held-out medians above C|ln eps|^-1: " << viol.size() << ", failed trials " << failed << ", "
           << fmt(secs) << " s";
  o.require(f.exponent >= 0.5 && f.exponent <= 1.5, "theta_hat in [0.5, 1.5]");
  o.require(f.r2 > 0.8, "R^2 > 0.8");
  o.require(viol.empty(), "median error <= C_fit |ln eps|^-1");
  o.require(failed == 0, "every trial succeeds");
  o.require(secs < 600, "runtime < 10 min");
}

// 7. Hoelder rate of the vandermonde route, lambda_k = k
void criterion7(Outcome& o) {
  ExperimentConfig c = sweep(Scenario::series_recovery, decade_grid(2, 12), 10);
  c.method = Method::vandermonde;
  c.alpha = 0.5;
  c.datum = DatumKind::holder;
  const auto recs = run_experiment(c);
  const RateFit f = fit_rate(recs, RateModel::holder);
  size_t failed = 0;
  for (const auto& r : recs) failed += r.status != "ok";
  o.detail << "gamma_hat " << fmt(f.exponent) << ", R^2 " << fmt(f.r2, 4) << ", failed trials " << failed;
  o.require(f.exponent > 0, "gamma_hat > 0");
  o.require(f.r2 > 0.9, "R^2 > 0.9");
  o.require(failed == 0, "every trial succeeds");
}

// 8. single-mode ratios grow without bound
void criterion8(Outcome& o) {
  PrecisionScope s(256);
  const auto lambda = EigenvalueSequence::power(Real(1), Real(1), 50);
  const auto r = no_holder_ratios(lambda, Real(1), 1, 50);
  size_t increases = 0;
  for (size_t k = 1; k < r.size(); ++k) increases += r[k] > r[k - 1];
  o.detail << "ratio k=1 " << r.front().str(4) << ", k=50 " << r.back().str(4) << ", increasing steps " << increases
           << "/49";
  o.require(increases == 49, "each term exceeds the previous");
  o.require(r.back() > r.front() * 10, "ratios diverge");
}

#ifndef DSR_CLI_PATH
#define DSR_CLI_PATH ""
#endif

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// 9. golden sensor certificate to K = 10^5
void criterion9(Outcome& o) {
  const size_t K = 100000;
  Stopwatch sw;
  const SensorPoint p = propose_point(SensorStrategy::golden);
  const SensorCheck c = verify_point(p, K);
  const double secs = sw.seconds();
  const std::string first = sensor_check_to_json(p, c, K).dump(2);
  const std::string second = sensor_check_to_json(p, verify_point(p, K), K).dump(2);
  o.detail << "d0_empirical " << c.d0_empirical.str(6) << " at k=" << c.argmin_k << ", " << fmt(secs) << " s";
  o.require(c.pass, "verify_point passes");
  o.require(c.d0_empirical > 0, "d0_empirical > 0");
  o.require(first == second, "identical report in-process");
  o.require(secs < 30, "runtime < 30 s");
  const std::string cli = DSR_CLI_PATH;
  if (!cli.empty()) {
    const std::string a = "acceptance_sensor_a.json", b = "acceptance_sensor_b.json";
    const std::string base = "\"" + cli + "\" sensor-check --x0 golden --K 100000 --out ";
    const int ra = std::system((base + a).c_str()), rb = std::system((base + b).c_str());
    const std::string ta = slurp(a), tb = slurp(b);
    o.detail << "; two CLI runs " << (ta == tb && !ta.empty() ? "byte-identical" : "differ");
    o.require(ra == 0 && rb == 0, "CLI runs succeed");
    o.require(!ta.empty() && ta == tb, "CLI output byte-reproducible");
    std::remove(a.c_str());
    std::remove(b.c_str());
  }
}

// 10. boundary inversion: noiseless accuracy and held-out rate bound
void criterion10(Outcome& o) {
  {
    PrecisionScope s(256);
    InitialDatum f;
    f.coeffs = CoefficientSequence(Vector{Real(1), Real(0.5), Real(-0.25), Real(0.2)});
    InversionConfig cfg;
    cfg.biortho.section_size = 8;
    const auto r = recover_initial_boundary(flux_channel(f, Real(1)), 1, 2, cfg);
    const double rel = oracle::rel_l2(r.datum->coeffs.entries(), f.coeffs.entries()).to_double();
    o.detail << "noiseless rel " << fmt(rel) << "; ";
    o.require(rel < 1e-6, "noiseless relative error < 1e-6");
  }
  ExperimentConfig c = sweep(Scenario::boundary_inversion, decade_grid(2, 12), 20);
  c.alpha = 1;
  c.theta = 1;  // beta
  c.support = 24;
  const auto recs = run_experiment(c);
  const double exponent = 1.0 / std::max(1.0, 1.0);
  const auto cal = select_seeds(recs, 0, 9), held = select_seeds(recs, 10, 19);
  const double C = calibrate_constant(cal, RateModel::log, exponent);
  const auto viol = bound_violations(held, RateModel::log, exponent, C);
  size_t failed = 0;
  for (const auto& r : recs) failed += r.status != "ok";
  o.detail << "C (seeds 0-9) " << fmt(C) << ", held-out medians above C|ln eps|^-1: " << viol.size()
           << ", failed trials " << failed;
  o.require(viol.empty(), "held-out medians under the calibrated curve");
  o.require(failed == 0, "every trial succeeds");
}

// 11. tensor product inversion in two dimensions
void criterion11(Outcome& o) {
  PrecisionScope s(256);
  std::mt19937_64 rng(11);
  TensorDatum F;
  InitialDatum a, b;
  a.coeffs = CoefficientSequence(oracle::random_coefficients(rng, 3));
  b.coeffs = CoefficientSequence(oracle::random_coefficients(rng, 3));
  b.mu = sqrt(Real(2));
  F.factors = {a, b};
  std::vector<SensorPoint> sensors;
  for (const auto& f : F.factors) sensors.push_back(certify(propose_point(SensorStrategy::golden, f.mu), 24));
  InversionConfig cfg;
  cfg.biortho.section_size = 8;
  const auto r = recover_tensor(hyperplane_channels(F, Real(1), sensors), Real("1e-3"), 1, 4, cfg);

  // relative error from the multi-index coefficients
  const Real w = pi() * pi() * a.mu * b.mu / 4;
  Real num = 0, den = 0;
  const auto& ea = r.tensor->factors[0].coeffs;
  const auto& eb = r.tensor->factors[1].coeffs;
  const size_t na = std::max(ea.size(), a.coeffs.size()), nb = std::max(eb.size(), b.coeffs.size());
  auto at = [](const CoefficientSequence& c, size_t k) { return k <= c.size() ? c.at(k) : Real(0); };
  for (size_t i = 1; i <= na; ++i)
    for (size_t j = 1; j <= nb; ++j) {
      const Real t = at(a.coeffs, i) * at(b.coeffs, j);
      const Real e = at(ea, i) * at(eb, j);
      num += (e - t) * (e - t);
      den += t * t;
    }
  const double rel = sqrt(num / den).to_double();

  // product-norm identity: the multi-index norm against the product of factor norms
  const Real full = sqrt(den * w);
  const Real product = a.l2_norm() * b.l2_norm();
  const Real gap = abs(full - product) / full;
  const Real ulp = ldexp(Real(1), 8 - precision_bits());
  // 64 x 64 Gauss-Legendre cross-check of the squared norm over the box
  const QuadratureRule qx = gauss_legendre(Real(0), a.mu * pi(), 64), qy = gauss_legendre(Real(0), b.mu * pi(), 64);
  Real quad = 0;
  for (size_t i = 0; i < qx.size(); ++i)
    for (size_t j = 0; j < qy.size(); ++j) {
      const Real v = tensor_eval(F, Real(1), Vector{qx.nodes[i], qy.nodes[j]}, Real(0));
      quad += qx.weights[i] * qy.weights[j] * v * v;
    }
  const Real qgap = abs(sqrt(quad) - product) / product;
  o.detail << "noiseless rel L2 " << fmt(rel) << "; norm identity rel gap " << gap.str(3) << " (quadrature "
           << qgap.str(3) << ")";
  o.require(rel < 1e-4, "relative L2 error < 1e-4");
  o.require(gap <= ulp, "||f|| = prod ||f_i|| to working precision");
  o.require(abs(F.l2_norm() - product) / product <= ulp, "tensor norm agrees with the factor product");
}

const std::map<int, std::pair<std::string, std::function<void(Outcome&)>>>& criteria() {
  static const std::map<int, std::pair<std::string, std::function<void(Outcome&)>>> table{
      {1, {"biorthogonality", criterion1}},
      {2, {"noiseless round-trip", criterion2}},
      {3, {"peeling certified chain", criterion3}},
      {4, {"vandermonde inverse-norm bound", criterion4}},
      {5, {"psi-norm growth", criterion5}},
      {6, {"log-rate reproduction", criterion6}},
      {7, {"Hoelder-rate reproduction", criterion7}},
      {8, {"no-Hoelder witness", criterion8}},
      {9, {"sensor certificate", criterion9}},
      {10, {"boundary inversion", criterion10}},
      {11, {"tensor d=2 inversion", criterion11}},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (const auto& [id, _] : criteria()) selected.push_back(id);

  int failures = 0;
  for (int id : selected) {
    auto it = criteria().find(id);
    if (it == criteria().end()) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }
    Outcome o;
    try {
      it->second.second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failures += !o.pass;
    std::cout << "criterion " << id << " (" << it->second.first << "): " << (o.pass ? "PASS" : "FAIL") << ": "
              << o.detail.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
