// SPDX-License-Identifier: Apache-2.0
#include "dsr/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "dsr/error.hpp"
#include "dsr/stats.hpp"

namespace dsr {

namespace {

const size_t kPrimes[] = {1, 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};

CoefficientSequence make_datum_stream(const ExperimentConfig& cfg, uint64_t seed, uint64_t stream) {
  if (cfg.datum == DatumKind::fixed) return CoefficientSequence(cfg.coefficients);
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(stream)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> U(0.5, 1.0);
  std::normal_distribution<double> N01;
  const double u = U(rng);
  Vector a(cfg.support);
  if (cfg.datum == DatumKind::random) {
    // xi_k <k>^-theta k^-(1/2 + 0.05), rescaled to h^theta norm m u
    Real s = 0;
    for (size_t k = 1; k <= cfg.support; ++k) {
      a[k - 1] = Real(N01(rng)) * pow(japanese_bracket(k), Real(-cfg.theta)) * pow(Real(static_cast<long>(k)), Real(-0.55));
      Real w = pow(japanese_bracket(k), Real(cfg.theta)) * a[k - 1];
      s += w * w;
    }
    const Real c = Real(cfg.m) * Real(u) / sqrt(s);
    for (auto& x : a) x *= c;
  } else {
    Real z = 0;
    std::vector<double> xi(cfg.support);
    for (auto& x : xi) {
      x = N01(rng);
      z += abs(Real(x));
    }
    z /= Real(u);
    for (size_t k = 1; k <= cfg.support; ++k)
      a[k - 1] = Real(cfg.m) * Real(xi[k - 1]) *
                 exp(-Real(cfg.holder_alpha) * pow(Real(static_cast<long>(k)), Real(cfg.holder_beta))) / z;
  }
  return CoefficientSequence(std::move(a));
}

InversionConfig inversion_config(const ExperimentConfig& cfg) {
  InversionConfig ic;
  ic.method = cfg.method;
  ic.T = cfg.T;
  ic.count = cfg.count;
  ic.precision_bits = cfg.precision_bits;
  ic.biortho.section_size = cfg.section_size;
  ic.biortho.B = cfg.B;
  ic.biortho.precision_bits = cfg.precision_bits;
  ic.peeling.modes = cfg.modes;
  ic.peeling.support_bound = cfg.support_bound;
  ic.holder.support_bound = cfg.support_bound;
  ic.holder.N_max = cfg.N_max;
  ic.holder_alpha = cfg.holder_alpha;
  ic.holder_beta = cfg.holder_beta;
  return ic;
}

Real coefficient_distance(const CoefficientSequence& a, const CoefficientSequence& b) {
  Real s = 0;
  const size_t n = std::max(a.size(), b.size());
  for (size_t k = 1; k <= n; ++k) {
    Real d = (k <= a.size() ? a.at(k) : Real(0)) - (k <= b.size() ? b.at(k) : Real(0));
    s += d * d;
  }
  return sqrt(s);
}

SeriesEvaluator with_noise(SeriesEvaluator f, SeriesEvaluator noise, const Real& eps) {
  if (eps.is_zero()) return f;
  return [f = std::move(f), noise = std::move(noise), eps](const Real& t) { return f(t) + eps * noise(t); };
}

ExperimentRecord run_trial(const ExperimentConfig& cfg, size_t grid_index, size_t trial) {
  const auto t0 = std::chrono::steady_clock::now();
  PrecisionScope scope(cfg.precision_bits);
  ExperimentRecord rec;
  rec.trial = trial;
  rec.seed = cfg.seed + trial;
  rec.epsilon = Real(cfg.noise_grid[grid_index]);
  const Real& eps = rec.epsilon;
  try {
    const InversionConfig ic = inversion_config(cfg);
    const SeriesEvaluator noise = noise_function(rec.seed, cfg.T);
    const size_t K = std::max(cfg.support, cfg.section_size.value_or(24));
    switch (cfg.scenario) {
      case Scenario::series_recovery: {
        const CoefficientSequence a = make_datum_stream(cfg, rec.seed, 0);
        EigenvalueSequence lambda = cfg.exponents ? EigenvalueSequence::explicit_values(*cfg.exponents)
                                                  : heat_exponents(cfg.alpha, cfg.mu, cfg.count);
        SeriesInput F(with_noise(dirichlet_evaluator(a, lambda), noise, eps), eps);
        RecoveryReport rep;
        if (cfg.method == Method::biortho)
          rep = recover_log(F, lambda, cfg.T, cfg.theta, cfg.m, ic.biortho);
        else if (cfg.method == Method::peeling)
          rep = recover_peeling(F, lambda, cfg.theta, cfg.m, ic.peeling);
        else
          rep = recover_holder(F, lambda, cfg.m, cfg.holder_alpha, cfg.holder_beta, ic.holder);
        rec.error = coefficient_distance(a, rep.estimate);
        rec.N = rep.truncation;
        break;
      }
      case Scenario::point_inversion:
      case Scenario::boundary_inversion: {
        InitialDatum f;
        f.coeffs = make_datum_stream(cfg, rec.seed, 0);
        f.mu = cfg.mu;
        MeasurementChannel ch;
        InversionResult res;
        if (cfg.scenario == Scenario::point_inversion) {
          const SensorPoint pt = certify(propose_point(cfg.sensor, cfg.mu), K);
          ch = point_channel(f, cfg.alpha, pt);
          ch.series.emplace(with_noise(*ch.series, noise, eps), eps);
          res = recover_initial_point(ch, cfg.theta, cfg.m, ic);
        } else {
          ch = flux_channel(f, cfg.alpha);
          ch.series.emplace(with_noise(*ch.series, noise, eps), eps);
          res = recover_initial_boundary(ch, cfg.theta, cfg.m, ic);
        }
        rec.error = l2_distance(f, *res.datum);
        rec.N = res.report.truncation;
        break;
      }
      case Scenario::tensor_inversion: {
        require(cfg.dim <= std::size(kPrimes), Errc::invalid_argument, "tensor scenario supports d <= 12");
        TensorDatum td;
        std::vector<SensorPoint> sensors;
        for (size_t j = 0; j < cfg.dim; ++j) {
          InitialDatum f;
          f.coeffs = make_datum_stream(cfg, rec.seed, j + 1);
          f.mu = cfg.mu * sqrt(Real(static_cast<long>(kPrimes[j])));
          sensors.push_back(certify(propose_point(cfg.sensor, f.mu), K));
          td.factors.push_back(std::move(f));
        }
        auto channels = hyperplane_channels(td, cfg.alpha, sensors);
        if (!eps.is_zero())
          for (auto& ch : channels) {
            HyperplaneField field = ch.field;
            ch.field = [field, noise, eps](const Vector& x, const Real& t) { return field(x, t) + eps * noise(t); };
            ch.noise_level = eps;
          }
        InversionResult res = recover_tensor(channels, Real(cfg.eta), cfg.theta, cfg.m, ic);
        rec.error = tensor_l2_distance(td, *res.tensor);
        rec.N = res.report.truncation;
        break;
      }
    }
  } catch (const Error& e) {
    rec.error = Real(NAN);
    rec.status = std::string(e.code() == Errc::refused ? "refused" : "error") + ": " + e.what();
  }
  rec.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

double fit_x(RateModel model, double eps) {
  switch (model) {
    case RateModel::log:
      return std::log(std::abs(std::log(eps)));
    case RateModel::doublelog:
      return std::log(std::log(std::abs(std::log(eps))));
    default:
      return std::log(eps);
  }
}

bool admissible(RateModel model, double eps) {
  if (!(eps > 0) || !std::isfinite(eps)) return false;
  if (model == RateModel::log) return eps < 1;
  if (model == RateModel::doublelog) return std::abs(std::log(eps)) > 1 && eps < 1;
  return true;
}

std::string clean_status(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

}  // namespace

void ExperimentConfig::check() const {
  require(!noise_grid.empty(), Errc::invalid_argument, "noise grid is empty");
  for (size_t i = 0; i < noise_grid.size(); ++i) {
    require(noise_grid[i] >= 0 && std::isfinite(noise_grid[i]), Errc::invalid_argument,
            "noise levels must be finite and nonnegative");
    require(i == 0 || noise_grid[i] < noise_grid[i - 1], Errc::invalid_argument, "noise grid must be decreasing");
  }
  require(trials >= 1, Errc::invalid_argument, "trials must be >= 1");
  require(precision_bits >= 32, Errc::invalid_argument, "precision must be at least 32 bits");
  require(theta > 0 && m > 0, Errc::invalid_argument, "theta and m must be positive");
  require(alpha > 0 && mu > 0 && T > 0, Errc::invalid_argument, "alpha, mu and T must be positive");
  if (datum == DatumKind::fixed)
    require(!coefficients.empty(), Errc::invalid_argument, "fixed datum needs coefficients");
  else
    require(support >= 1, Errc::invalid_argument, "support must be >= 1");
  require(count >= (datum == DatumKind::fixed ? coefficients.size() : support), Errc::invalid_argument,
          "exponent count below the datum support");
  require(dim >= 1, Errc::invalid_argument, "tensor dimension must be >= 1");
  require(threads >= 1, Errc::invalid_argument, "threads must be >= 1");
  require(eta > 0, Errc::invalid_argument, "eta must be positive");
}

SeriesEvaluator noise_function(uint64_t seed, const Real& T) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), 0x6a09e667u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int terms = 8;
  Vector c, w, p;
  Real total = 0;
  for (int j = 0; j < terms; ++j) {
    c.push_back(Real(2 * U(rng) - 1));
    w.push_back(8 * pi() * Real(U(rng)) / T);
    p.push_back(2 * pi() * Real(U(rng)));
    total += abs(c.back());
  }
  for (auto& x : c) x /= total;
  return [c, w, p](const Real& t) {
    Real s = 0;
    for (size_t j = 0; j < c.size(); ++j) s += c[j] * cos(w[j] * t + p[j]);
    return s;
  };
}

CoefficientSequence make_datum(const ExperimentConfig& cfg, uint64_t seed) {
  PrecisionScope scope(cfg.precision_bits);
  return make_datum_stream(cfg, seed, 0);
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.check();
  const size_t total = cfg.noise_grid.size() * cfg.trials;
  std::vector<ExperimentRecord> out(total);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < total; i = next++) out[i] = run_trial(cfg, i / cfg.trials, i % cfg.trials);
  };
  const size_t n = std::min(cfg.threads, total);
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::stable_sort(out.begin(), out.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
    return a.trial < b.trial;
  });
  return out;
}

double model_rate(RateModel model, double exponent, double eps) {
  switch (model) {
    case RateModel::log:
      return std::pow(std::abs(std::log(eps)), -exponent);
    case RateModel::doublelog:
      return std::pow(std::log(std::abs(std::log(eps))), -exponent / 2);
    default:
      return std::pow(eps, exponent);
  }
}

std::vector<std::pair<double, double>> median_errors(const std::vector<ExperimentRecord>& records) {
  std::map<double, std::vector<double>> by_eps;
  for (const auto& r : records) {
    const double e = r.epsilon.to_double();
    const double v = r.error.to_double();
    if (e > 0 && std::isfinite(v)) by_eps[e].push_back(v);
  }
  std::vector<std::pair<double, double>> out;
  for (auto& [e, v] : by_eps) out.emplace_back(e, median(v));
  return out;
}

RateFit fit_rate(const std::vector<ExperimentRecord>& records, RateModel model) {
  std::vector<double> x, y;
  for (const auto& [e, v] : median_errors(records)) {
    if (!admissible(model, e) || !(v > 0)) continue;
    x.push_back(fit_x(model, e));
    y.push_back(std::log(v));
  }
  require(x.size() >= 4, Errc::invalid_argument,
          "rate fit needs at least 4 distinct noise levels with finite positive median error");
  LinearFit f = linear_fit(x, y);
  RateFit out;
  out.model = model;
  out.points = x.size();
  out.degenerate = f.degenerate;
  out.r2 = std::clamp(f.r2, 0.0, 1.0);
  out.C = std::exp(f.intercept);
  switch (model) {
    case RateModel::log:
      out.exponent = -f.slope;
      break;
    case RateModel::doublelog:
      out.exponent = -2 * f.slope;
      break;
    default:
      out.exponent = f.slope;
  }
  return out;
}

double calibrate_constant(const std::vector<ExperimentRecord>& records, RateModel model, double exponent) {
  double C = 0;
  for (const auto& r : records) {
    const double e = r.epsilon.to_double(), v = r.error.to_double();
    if (admissible(model, e) && std::isfinite(v)) C = std::max(C, v / model_rate(model, exponent, e));
  }
  return C;
}

std::vector<double> bound_violations(const std::vector<ExperimentRecord>& records, RateModel model, double exponent,
                                     double C) {
  std::vector<double> out;
  for (const auto& [e, v] : median_errors(records))
    if (admissible(model, e) && v > C * model_rate(model, exponent, e)) out.push_back(e);
  return out;
}

std::vector<ExperimentRecord> select_seeds(const std::vector<ExperimentRecord>& records, uint64_t lo, uint64_t hi) {
  std::vector<ExperimentRecord> out;
  for (const auto& r : records)
    if (r.seed >= lo && r.seed <= hi) out.push_back(r);
  return out;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream os;
  os << "epsilon,trial,seed,error,N,status\n";
  for (const auto& r : records)
    os << r.epsilon.str() << ',' << r.trial << ',' << r.seed << ',' << r.error.str() << ',' << r.N << ','
       << clean_status(r.status) << '\n';
  return os.str();
}

std::vector<ExperimentRecord> records_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  require(static_cast<bool>(std::getline(is, line)) && line == "epsilon,trial,seed,error,N,status", Errc::io,
          "records CSV: missing or unexpected header");
  std::vector<ExperimentRecord> out;
  size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    size_t pos = 0;
    for (int i = 0; i < 5; ++i) {
      size_t c = line.find(',', pos);
      require(c != std::string::npos, Errc::io, "records CSV line " + std::to_string(lineno) + ": too few fields");
      f.push_back(line.substr(pos, c - pos));
      pos = c + 1;
    }
    ExperimentRecord r;
    try {
      r.epsilon = Real(f[0]);
      r.trial = std::stoull(f[1]);
      r.seed = std::stoull(f[2]);
      r.error = Real(f[3]);
      r.N = std::stoull(f[4]);
    } catch (const std::exception& e) {
      fail(Errc::io, "records CSV line " + std::to_string(lineno) + ": " + e.what());
    }
    r.status = line.substr(pos);
    out.push_back(std::move(r));
  }
  return out;
}

void export_records(const std::vector<ExperimentRecord>& records, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), Errc::io, "cannot write " + path);
  os << records_to_csv(records);
  require(static_cast<bool>(os), Errc::io, "write failed: " + path);
}

std::vector<ExperimentRecord> import_records(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), Errc::io, "cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return records_from_csv(ss.str());
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::series_recovery:
      return "series_recovery";
    case Scenario::point_inversion:
      return "point_inversion";
    case Scenario::boundary_inversion:
      return "boundary_inversion";
    default:
      return "tensor_inversion";
  }
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "series_recovery") return Scenario::series_recovery;
  if (s == "point_inversion") return Scenario::point_inversion;
  if (s == "boundary_inversion") return Scenario::boundary_inversion;
  if (s == "tensor_inversion") return Scenario::tensor_inversion;
  fail(Errc::invalid_argument, "unknown scenario '" + s + "'");
}

std::string to_string(DatumKind d) {
  switch (d) {
    case DatumKind::fixed:
      return "fixed";
    case DatumKind::random:
      return "random";
    default:
      return "holder";
  }
}

DatumKind datum_from_string(const std::string& s) {
  if (s == "fixed") return DatumKind::fixed;
  if (s == "random") return DatumKind::random;
  if (s == "holder") return DatumKind::holder;
  fail(Errc::invalid_argument, "unknown datum generator '" + s + "'");
}

std::string to_string(RateModel m) {
  switch (m) {
    case RateModel::log:
      return "log";
    case RateModel::doublelog:
      return "doublelog";
    default:
      return "holder";
  }
}

RateModel model_from_string(const std::string& s) {
  if (s == "log") return RateModel::log;
  if (s == "doublelog") return RateModel::doublelog;
  if (s == "holder") return RateModel::holder;
  fail(Errc::invalid_argument, "unknown rate model '" + s + "' (log, doublelog, holder)");
}

}  // namespace dsr
