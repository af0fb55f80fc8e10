// SPDX-License-Identifier: Apache-2.0
#include "dsr/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dsr/error.hpp"

namespace dsr {

namespace {

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

Json gap_to_json(const GapParams& g) {
  return {{"beta0", real_to_json(g.beta0)},
          {"beta1", real_to_json(g.beta1)},
          {"c", real_to_json(g.c)},
          {"d", real_to_json(g.d)}};
}

}  // namespace

Json real_to_json(const Real& x) { return x.str(); }

Real real_from_json(const Json& j) {
  if (j.is_string()) return Real(std::string_view(j.get_ref<const std::string&>()));
  if (j.is_number_integer()) return Real(j.get<long>());
  if (j.is_number()) return Real(j.get<double>());
  fail(Errc::invalid_argument, "expected a real number, got " + j.dump());
}

Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(real_to_json(x));
  return a;
}

Vector vector_from_json(const Json& j) {
  require(j.is_array(), Errc::invalid_argument, "expected an array of reals");
  Vector v;
  for (const auto& x : j) v.push_back(real_from_json(x));
  return v;
}

Json eigen_to_json(const EigenvalueSequence& s) {
  Json j;
  if (s.family()) {
    j["family"] = "power";
    j["alpha"] = real_to_json(s.family()->alpha);
    j["mu"] = real_to_json(s.family()->mu);
    j["count"] = s.size();
  } else {
    j["values"] = vector_to_json(s.values());
  }
  if (s.gap()) j["gap"] = gap_to_json(*s.gap());
  if (s.asymptotic())
    j["asymptotic"] = {{"K", real_to_json(s.asymptotic()->K)},
                       {"alpha_shift", real_to_json(s.asymptotic()->alpha_shift)},
                       {"beta", real_to_json(s.asymptotic()->beta)}};
  if (s.tail_exponent()) j["tail_exponent"] = real_to_json(*s.tail_exponent());
  return j;
}

EigenvalueSequence eigen_from_json(const Json& j) {
  EigenvalueSequence s;
  if (j.contains("values")) {
    s = EigenvalueSequence::explicit_values(vector_from_json(j.at("values")));
  } else {
    require(get_or<std::string>(j, "family", "power") == "power", Errc::invalid_argument,
            "eigen family must be 'power' or an explicit 'values' list");
    s = EigenvalueSequence::power(j.contains("alpha") ? real_from_json(j.at("alpha")) : Real(1),
                                  j.contains("mu") ? real_from_json(j.at("mu")) : Real(1),
                                  get_or<size_t>(j, "count", 64));
  }
  if (j.contains("gap")) {
    const Json& g = j.at("gap");
    s = s.with_gap({real_from_json(g.at("beta0")), real_from_json(g.at("beta1")), real_from_json(g.at("c")),
                    real_from_json(g.at("d"))});
  }
  if (j.contains("asymptotic")) {
    const Json& a = j.at("asymptotic");
    s = s.with_asymptotic({real_from_json(a.at("K")), real_from_json(a.at("alpha_shift")), real_from_json(a.at("beta"))});
  }
  if (j.contains("tail_exponent")) s = s.with_tail_exponent(real_from_json(j.at("tail_exponent")));
  s.check_invariants();
  return s;
}

Json datum_to_json(const InitialDatum& f) {
  Json j{{"coefficients", vector_to_json(f.coeffs.entries())}, {"mu", real_to_json(f.mu)}};
  if (f.regularity) j["regularity"] = {{"theta", real_to_json(f.regularity->theta)}, {"m", real_to_json(f.regularity->m)}};
  return j;
}

InitialDatum datum_from_json(const Json& j) {
  InitialDatum f;
  f.coeffs = CoefficientSequence(vector_from_json(j.at("coefficients")));
  if (j.contains("mu")) f.mu = real_from_json(j.at("mu"));
  if (j.contains("regularity"))
    f.regularity = Regularity{real_from_json(j.at("regularity").at("theta")), real_from_json(j.at("regularity").at("m"))};
  f.check();
  return f;
}

std::string sample_csv(const DirichletSample& s) {
  std::ostringstream os;
  os << "t,value\n";
  for (size_t i = 0; i < s.times.size(); ++i) os << s.times[i].str() << ',' << s.values[i].str() << '\n';
  return os.str();
}

Json sample_sidecar(const DirichletSample& s) {
  Json j{{"epsilon", real_to_json(s.noise_level)},
         {"noise_norm", s.noise_norm == NoiseNorm::sup ? "sup" : "l2"},
         {"T", real_to_json(s.horizon)}};
  j["seed"] = s.seed ? Json(*s.seed) : Json(nullptr);
  return j;
}

DirichletSample sample_from_text(const std::string& csv, const Json& sidecar) {
  DirichletSample s;
  std::istringstream is(csv);
  std::string line;
  require(static_cast<bool>(std::getline(is, line)) && line == "t,value", Errc::io, "sample CSV: expected header t,value");
  size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const size_t c = line.find(',');
    require(c != std::string::npos, Errc::io, "sample CSV line " + std::to_string(lineno) + ": expected t,value");
    try {
      s.times.push_back(Real(std::string_view(line).substr(0, c)));
      s.values.push_back(Real(std::string_view(line).substr(c + 1)));
    } catch (const Error& e) {
      fail(Errc::io, "sample CSV line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  s.noise_level = sidecar.contains("epsilon") ? real_from_json(sidecar.at("epsilon")) : Real(0);
  const std::string nn = get_or<std::string>(sidecar, "noise_norm", "sup");
  require(nn == "sup" || nn == "l2", Errc::io, "sidecar noise_norm must be 'sup' or 'l2'");
  s.noise_norm = nn == "sup" ? NoiseNorm::sup : NoiseNorm::l2;
  s.horizon = sidecar.contains("T") ? real_from_json(sidecar.at("T")) : (s.times.empty() ? Real(1) : s.times.back());
  if (sidecar.contains("seed") && !sidecar.at("seed").is_null()) s.seed = sidecar.at("seed").get<uint64_t>();
  s.check();
  return s;
}

std::string sidecar_path(const std::string& path) {
  return std::filesystem::path(path).replace_extension(".json").string();
}

void write_sample(const DirichletSample& s, const std::string& path) {
  write_file(path, sample_csv(s));
  write_file(sidecar_path(path), sample_sidecar(s).dump(2) + "\n");
}

DirichletSample read_sample(const std::string& path) {
  Json side = Json::object();
  const std::string sp = sidecar_path(path);
  if (std::filesystem::exists(sp)) {
    try {
      side = Json::parse(read_file(sp));
    } catch (const Json::exception& e) {
      fail(Errc::io, sp + ": " + e.what());
    }
  }
  return sample_from_text(read_file(path), side);
}

Json family_to_json(const BiorthoFamily& fam) {
  Json combo = Json::array();
  for (size_t i = 0; i < fam.N; ++i) {
    Json row = Json::array();
    for (size_t k = 0; k < fam.N; ++k) row.push_back(real_to_json(fam.combo(i, k)));
    combo.push_back(std::move(row));
  }
  return {{"T", real_to_json(fam.T)},
          {"N", fam.N},
          {"precision_bits", fam.precision_bits},
          {"lambda", vector_to_json(fam.lambda.values())},
          {"combo", std::move(combo)},
          {"psi_norms", vector_to_json(fam.psi_norms)},
          {"residual", real_to_json(fam.residual)},
          {"summable", fam.summable}};
}

BiorthoFamily family_from_json(const Json& j) {
  BiorthoFamily fam;
  fam.precision_bits = j.at("precision_bits").get<int>();
  PrecisionScope scope(fam.precision_bits);
  fam.N = j.at("N").get<size_t>();
  fam.T = real_from_json(j.at("T"));
  fam.lambda = EigenvalueSequence::explicit_values(vector_from_json(j.at("lambda")));
  require(fam.lambda.size() == fam.N, Errc::io, "family JSON: lambda length differs from N");
  const Json& rows = j.at("combo");
  require(rows.size() == fam.N, Errc::io, "family JSON: combo has wrong row count");
  fam.combo = Matrix(fam.N, fam.N);
  for (size_t i = 0; i < fam.N; ++i) {
    require(rows[i].size() == fam.N, Errc::io, "family JSON: combo row has wrong length");
    for (size_t k = 0; k < fam.N; ++k) fam.combo(i, k) = real_from_json(rows[i][k]);
  }
  fam.psi_norms = vector_from_json(j.at("psi_norms"));
  fam.residual = real_from_json(j.at("residual"));
  fam.summable = get_or<bool>(j, "summable", true);
  return fam;
}

Json report_to_json(const RecoveryReport& r) {
  Json j{{"method", to_string(r.method)}, {"N", r.truncation}, {"estimate", vector_to_json(r.estimate.entries())}};
  j["certified_bound"] = r.certified_bound ? real_to_json(*r.certified_bound) : Json(nullptr);
  Json d = Json::object();
  for (const auto& [k, v] : r.diagnostics) d[k] = real_to_json(v);
  j["diagnostics"] = std::move(d);
  j["notes"] = r.notes;
  j["timings"] = r.timings;
  return j;
}

Json inversion_to_json(const InversionResult& r) {
  Json j = report_to_json(r.report);
  if (r.datum) j["datum"] = datum_to_json(*r.datum);
  if (r.tensor) {
    Json f = Json::array();
    for (const auto& x : r.tensor->factors) f.push_back(datum_to_json(x));
    j["tensor"] = std::move(f);
  }
  j["theorem_bound"] = {{"value", real_to_json(r.theorem_bound.value)},
                        {"tag", r.theorem_bound.tag},
                        {"calibrated", r.theorem_bound.calibrated}};
  if (!r.axis_reports.empty()) {
    Json a = Json::array();
    for (const auto& x : r.axis_reports) a.push_back(report_to_json(x));
    j["axis_reports"] = std::move(a);
  }
  return j;
}

Json sensor_check_to_json(const SensorPoint& pt, const SensorCheck& c, size_t K) {
  Json j{{"x0", real_to_json(pt.x0)},
         {"mu", real_to_json(pt.mu)},
         {"strategy", to_string(pt.strategy)},
         {"expression", pt.expression},
         {"K", K},
         {"pass", c.pass},
         {"d0_empirical", real_to_json(c.d0_empirical)},
         {"argmin_k", c.argmin_k},
         {"bits_used", c.bits_used}};
  j["first_zero"] = c.first_zero ? Json(c.first_zero) : Json(nullptr);
  return j;
}

ExperimentConfig experiment_from_json(const Json& j) {
  ExperimentConfig c;
  if (j.contains("scenario")) c.scenario = scenario_from_string(j.at("scenario").get<std::string>());
  if (j.contains("method")) c.method = method_from_string(j.at("method").get<std::string>());
  if (j.contains("precision_bits")) c.precision_bits = j.at("precision_bits").get<int>();
  PrecisionScope scope(c.precision_bits);
  if (j.contains("alpha")) c.alpha = real_from_json(j.at("alpha"));
  if (j.contains("mu")) c.mu = real_from_json(j.at("mu"));
  if (j.contains("T")) c.T = real_from_json(j.at("T"));
  c.count = get_or<size_t>(j, "count", c.count);
  if (j.contains("exponents")) c.exponents = vector_from_json(j.at("exponents"));
  if (j.contains("datum")) c.datum = datum_from_string(j.at("datum").get<std::string>());
  if (j.contains("coefficients")) c.coefficients = vector_from_json(j.at("coefficients"));
  c.support = get_or<size_t>(j, "support", c.support);
  c.theta = get_or<double>(j, "theta", c.theta);
  c.m = get_or<double>(j, "m", c.m);
  c.holder_alpha = get_or<double>(j, "holder_alpha", c.holder_alpha);
  c.holder_beta = get_or<double>(j, "holder_beta", c.holder_beta);
  if (j.contains("noise_grid")) c.noise_grid = j.at("noise_grid").get<std::vector<double>>();
  c.trials = get_or<size_t>(j, "trials", c.trials);
  c.seed = get_or<uint64_t>(j, "seed", c.seed);
  if (j.contains("B")) {
    std::vector<Interval> B;
    for (const auto& iv : j.at("B")) B.push_back({real_from_json(iv.at(0)), real_from_json(iv.at(1))});
    c.B = std::move(B);
  }
  if (j.contains("section_size")) c.section_size = j.at("section_size").get<size_t>();
  if (j.contains("modes")) c.modes = j.at("modes").get<size_t>();
  if (j.contains("support_bound")) c.support_bound = j.at("support_bound").get<size_t>();
  c.N_max = get_or<size_t>(j, "N_max", c.N_max);
  if (j.contains("sensor")) {
    const std::string s = j.at("sensor").get<std::string>();
    require(s == "golden" || s == "silver", Errc::invalid_argument, "experiment sensor must be golden or silver");
    c.sensor = s == "golden" ? SensorStrategy::golden : SensorStrategy::silver;
  }
  c.eta = get_or<double>(j, "eta", c.eta);
  c.dim = get_or<size_t>(j, "dim", c.dim);
  c.threads = get_or<size_t>(j, "threads", c.threads);
  c.output = get_or<std::string>(j, "output", c.output);
  c.check();
  return c;
}

Json experiment_to_json(const ExperimentConfig& c) {
  Json j{{"scenario", to_string(c.scenario)},
         {"method", to_string(c.method)},
         {"alpha", real_to_json(c.alpha)},
         {"mu", real_to_json(c.mu)},
         {"count", c.count},
         {"datum", to_string(c.datum)},
         {"support", c.support},
         {"theta", c.theta},
         {"m", c.m},
         {"holder_alpha", c.holder_alpha},
         {"holder_beta", c.holder_beta},
         {"noise_grid", c.noise_grid},
         {"trials", c.trials},
         {"seed", c.seed},
         {"precision_bits", c.precision_bits},
         {"T", real_to_json(c.T)},
         {"N_max", c.N_max},
         {"sensor", to_string(c.sensor)},
         {"eta", c.eta},
         {"dim", c.dim},
         {"threads", c.threads},
         {"output", c.output}};
  if (c.exponents) j["exponents"] = vector_to_json(*c.exponents);
  if (!c.coefficients.empty()) j["coefficients"] = vector_to_json(c.coefficients);
  if (c.B) {
    Json b = Json::array();
    for (const auto& iv : *c.B) b.push_back({real_to_json(iv.lo), real_to_json(iv.hi)});
    j["B"] = std::move(b);
  }
  if (c.section_size) j["section_size"] = *c.section_size;
  if (c.modes) j["modes"] = *c.modes;
  if (c.support_bound) j["support_bound"] = *c.support_bound;
  return j;
}

Json fit_to_json(const RateFit& f) {
  return {{"model", to_string(f.model)}, {"exponent", f.exponent}, {"C", f.C},
          {"r2", f.r2},                  {"degenerate", f.degenerate}, {"points", f.points}};
}

void export_experiment(const std::vector<ExperimentRecord>& records, const std::vector<RateFit>& fits,
                       const ExperimentConfig& cfg, const std::string& path) {
  export_records(records, path);
  Json fj = Json::array();
  for (const auto& f : fits) fj.push_back(fit_to_json(f));
  Json runtimes = Json::array();
  for (const auto& r : records) runtimes.push_back(r.runtime);
  Json side{{"config", experiment_to_json(cfg)}, {"fits", std::move(fj)}, {"runtimes", std::move(runtimes)}};
  write_file(sidecar_path(path), side.dump(2) + "\n");
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), Errc::io, "cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), Errc::io, "cannot write " + path);
  os << text;
  require(static_cast<bool>(os), Errc::io, "write failed: " + path);
}

}  // namespace dsr
