// SPDX-License-Identifier: Apache-2.0
#include "dsr/dsr.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "dsr/error.hpp"
#include "dsr/io.hpp"

struct dsr_eigen {
  dsr::EigenvalueSequence seq;
};

struct dsr_family {
  dsr::BiorthoFamily fam;
};

struct dsr_sensor {
  dsr::SensorPoint pt;
};

namespace {

using dsr::Json;
using dsr::Real;

thread_local std::string g_last_error;

dsr_status set_error(dsr_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
dsr_status guarded(F&& body) {
  try {
    body();
    return DSR_OK;
  } catch (const dsr::Error& e) {
    return set_error(static_cast<dsr_status>(static_cast<int>(e.code())), e.what());
  } catch (const Json::exception& e) {
    return set_error(DSR_INVALID_ARGUMENT, std::string("config: ") + e.what());
  } catch (const std::bad_alloc&) {
    return set_error(DSR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(DSR_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  dsr::require(p != nullptr, dsr::Errc::invalid_argument, std::string(what) + " is null");
}

Json parse(const char* text) {
  need(text, "config");
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    dsr::fail(dsr::Errc::invalid_argument, std::string("config is not valid JSON: ") + e.what());
  }
}

int resolve_bits(const Json& cfg, const dsr_options* opt) {
  if (opt && opt->precision_bits > 0) return opt->precision_bits;
  return cfg.value("precision_bits", 256);
}

uint64_t resolve_seed(const Json& cfg, const dsr_options* opt) {
  if (opt && opt->has_seed) return opt->seed;
  if (cfg.contains("noise") && cfg.at("noise").contains("seed")) return cfg.at("noise").at("seed").get<uint64_t>();
  return cfg.value("seed", uint64_t{0});
}

Real real_or(const Json& cfg, const char* key, const Real& fallback) {
  return cfg.contains(key) ? dsr::real_from_json(cfg.at(key)) : fallback;
}

dsr::SeriesEvaluator add_noise(dsr::SeriesEvaluator f, const Real& eps, uint64_t seed, const Real& T) {
  if (eps.is_zero()) return f;
  auto noise = dsr::noise_function(seed, T);
  return [f = std::move(f), noise, eps](const Real& t) { return f(t) + eps * noise(t); };
}

dsr::InversionConfig inversion_config(const Json& cfg, int bits) {
  dsr::InversionConfig ic;
  ic.precision_bits = bits;
  ic.method = dsr::method_from_string(cfg.value("method", std::string("biortho")));
  ic.T = real_or(cfg, "T", Real(1));
  ic.count = cfg.value("count", ic.count);
  if (cfg.contains("section_size")) ic.biortho.section_size = cfg.at("section_size").get<size_t>();
  ic.biortho.quadrature_order = cfg.value("quadrature_order", ic.biortho.quadrature_order);
  ic.biortho.precision_bits = bits;
  if (cfg.contains("truncation_C")) ic.biortho.truncation_C = cfg.at("truncation_C").get<double>();
  if (cfg.contains("B")) {
    std::vector<dsr::Interval> B;
    for (const auto& iv : cfg.at("B")) B.push_back({dsr::real_from_json(iv.at(0)), dsr::real_from_json(iv.at(1))});
    ic.biortho.B = std::move(B);
  }
  if (cfg.contains("modes")) ic.peeling.modes = cfg.at("modes").get<size_t>();
  if (cfg.contains("support_bound")) {
    ic.peeling.support_bound = cfg.at("support_bound").get<size_t>();
    ic.holder.support_bound = ic.peeling.support_bound;
  }
  if (cfg.contains("N")) ic.holder.N = cfg.at("N").get<size_t>();
  ic.holder.N_max = cfg.value("N_max", ic.holder.N_max);
  if (cfg.contains("tau")) ic.holder.tau = dsr::real_from_json(cfg.at("tau"));
  ic.holder_alpha = cfg.value("holder_alpha", ic.holder_alpha);
  if (cfg.contains("holder_beta")) ic.holder_beta = cfg.at("holder_beta").get<double>();
  if (cfg.contains("theorem_C")) {
    ic.theorem_C = cfg.at("theorem_C").get<double>();
    ic.biortho.theorem_C = ic.peeling.theorem_C = ic.holder.theorem_C = ic.theorem_C;
  }
  if (cfg.contains("flux_C")) ic.flux_C = cfg.at("flux_C").get<double>();
  return ic;
}

dsr::SensorPoint certified_sensor(const Json& entry, const Real& mu, size_t K) {
  const std::string expr = entry.is_string() ? entry.get<std::string>() : std::string("golden");
  return dsr::certify(dsr::explicit_point(expr, mu), K);
}

Json recover(const Json& cfg, const dsr_options* opt) {
  const int bits = resolve_bits(cfg, opt);
  dsr::PrecisionScope scope(bits);
  dsr::InversionConfig ic = inversion_config(cfg, bits);
  const std::string channel = cfg.value("channel", std::string("point"));
  const Real alpha = real_or(cfg, "alpha", Real(1));
  const Real mu = real_or(cfg, "mu", Real(1));
  const double theta = cfg.value("theta", 1.0);
  const double m = cfg.value("m", 1.0);
  const Real eps = cfg.contains("noise") ? real_or(cfg.at("noise"), "epsilon", Real(0)) : Real(0);
  const uint64_t seed = resolve_seed(cfg, opt);
  const bool has_sample = cfg.contains("sample");
  const size_t K = cfg.value("K", size_t{24});

  if (channel == "series") {
    const dsr::EigenvalueSequence lambda = cfg.contains("exponents")
                                               ? dsr::eigen_from_json(cfg.at("exponents"))
                                               : dsr::heat_exponents(alpha, mu, ic.count);
    std::optional<dsr::CoefficientSequence> truth;
    std::optional<dsr::SeriesInput> F;
    if (has_sample) {
      F.emplace(dsr::read_sample(cfg.at("sample").get<std::string>()));
    } else {
      dsr::require(cfg.contains("coefficients"), dsr::Errc::invalid_argument,
                   "series recovery needs 'sample' or 'coefficients'");
      truth = dsr::CoefficientSequence(dsr::vector_from_json(cfg.at("coefficients")));
      F.emplace(add_noise(dsr::dirichlet_evaluator(*truth, lambda), eps, seed, ic.T), eps);
    }
    dsr::RecoveryReport rep;
    switch (ic.method) {
      case dsr::Method::biortho:
        rep = dsr::recover_log(*F, lambda, ic.T, theta, m, ic.biortho);
        break;
      case dsr::Method::peeling:
        rep = dsr::recover_peeling(*F, lambda, theta, m, ic.peeling);
        break;
      default:
        rep = dsr::recover_holder(*F, lambda, m, ic.holder_alpha, ic.holder_beta.value_or(2.0), ic.holder);
    }
    if (truth) {
      Real s = 0;
      const size_t n = std::max(truth->size(), rep.estimate.size());
      for (size_t k = 1; k <= n; ++k) {
        Real d = (k <= truth->size() ? truth->at(k) : Real(0)) - (k <= rep.estimate.size() ? rep.estimate.at(k) : Real(0));
        s += d * d;
      }
      rep.diagnostics["l2_error"] = sqrt(s);
    }
    Json out = dsr::report_to_json(rep);
    out["channel"] = channel;
    return out;
  }

  dsr::InversionResult res;
  if (channel == "point" || channel == "flux") {
    std::optional<dsr::InitialDatum> truth;
    if (cfg.contains("truth")) truth = dsr::datum_from_json(cfg.at("truth"));
    const Real mu_c = truth ? truth->mu : mu;
    dsr::MeasurementChannel ch;
    if (channel == "point") {
      const dsr::SensorPoint pt =
          certified_sensor(cfg.value("sensor", Json("golden")), mu_c, std::max(K, truth ? truth->coeffs.size() : 0));
      if (has_sample)
        ch = dsr::point_channel(dsr::read_sample(cfg.at("sample").get<std::string>()), alpha, pt);
      else {
        dsr::require(truth.has_value(), dsr::Errc::invalid_argument, "point recovery needs 'sample' or 'truth'");
        ch = dsr::point_channel(*truth, alpha, pt);
      }
    } else {
      if (has_sample)
        ch = dsr::flux_channel(dsr::read_sample(cfg.at("sample").get<std::string>()), alpha, mu_c);
      else {
        dsr::require(truth.has_value(), dsr::Errc::invalid_argument, "flux recovery needs 'sample' or 'truth'");
        ch = dsr::flux_channel(*truth, alpha);
      }
    }
    if (!has_sample) ch.series.emplace(add_noise(*ch.series, eps, seed, ic.T), eps);
    ic.truth = truth;
    res = channel == "point" ? dsr::recover_initial_point(ch, theta, m, ic)
                             : dsr::recover_initial_boundary(ch, cfg.value("beta", 1.0), m, ic);
  } else if (channel == "tensor") {
    dsr::require(cfg.contains("tensor"), dsr::Errc::invalid_argument, "tensor recovery needs a 'tensor' factor list");
    dsr::TensorDatum td;
    for (const auto& f : cfg.at("tensor")) td.factors.push_back(dsr::datum_from_json(f));
    std::vector<dsr::SensorPoint> sensors;
    const Json sensor = cfg.value("sensor", Json("golden"));
    for (size_t j = 0; j < td.dim(); ++j)
      sensors.push_back(certified_sensor(sensor.is_array() ? sensor.at(j) : sensor, td.factors[j].mu,
                                         std::max(K, td.factors[j].coeffs.size())));
    auto channels = dsr::hyperplane_channels(td, alpha, sensors);
    if (!eps.is_zero()) {
      auto noise = dsr::noise_function(seed, ic.T);
      for (auto& c : channels) {
        dsr::HyperplaneField field = c.field;
        c.field = [field, noise, eps](const dsr::Vector& x, const Real& t) { return field(x, t) + eps * noise(t); };
        c.noise_level = eps;
      }
    }
    ic.truth_tensor = td;
    res = dsr::recover_tensor(channels, real_or(cfg, "eta", Real("1e-3")), theta, m, ic);
  } else {
    dsr::fail(dsr::Errc::invalid_argument, "unknown channel '" + channel + "' (point, flux, tensor, series)");
  }
  Json out = dsr::inversion_to_json(res);
  out["channel"] = channel;
  return out;
}

Json forward(const Json& cfg, const dsr_options* opt, const std::string& path) {
  const int bits = resolve_bits(cfg, opt);
  dsr::PrecisionScope scope(bits);
  const std::string kind = cfg.value("kind", std::string("point"));
  const Real T = real_or(cfg, "T", Real(1));
  const Real alpha = real_or(cfg, "alpha", Real(1));
  dsr::Vector times;
  if (cfg.contains("times")) {
    times = dsr::vector_from_json(cfg.at("times"));
  } else {
    const size_t n = cfg.value("n", size_t{101});
    dsr::require(n >= 2, dsr::Errc::invalid_argument, "forward grid needs n >= 2");
    for (size_t i = 0; i < n; ++i) times.push_back(T * Real(static_cast<long>(i)) / Real(static_cast<long>(n - 1)));
  }
  dsr::SeriesEvaluator truth;
  if (kind == "series") {
    dsr::require(cfg.contains("coefficients"), dsr::Errc::invalid_argument, "series forward needs 'coefficients'");
    const dsr::EigenvalueSequence lambda = cfg.contains("exponents") ? dsr::eigen_from_json(cfg.at("exponents"))
                                                                     : dsr::heat_exponents(alpha, Real(1), 64);
    truth = dsr::dirichlet_evaluator(dsr::CoefficientSequence(dsr::vector_from_json(cfg.at("coefficients"))), lambda);
  } else {
    dsr::require(cfg.contains("datum"), dsr::Errc::invalid_argument, "forward needs a 'datum'");
    const dsr::InitialDatum f = dsr::datum_from_json(cfg.at("datum"));
    if (kind == "point") {
      const Real x0 = dsr::eval_expression(cfg.value("x0", std::string("golden")), f.mu);
      truth = [f, alpha, x0](const Real& t) { return dsr::heat_point(f, alpha, x0, t); };
    } else if (kind == "flux") {
      truth = dsr::dirichlet_evaluator(dsr::flux_coefficients(f),
                                       dsr::heat_exponents(alpha, f.mu, std::max<size_t>(f.coeffs.size(), 1)));
    } else {
      dsr::fail(dsr::Errc::invalid_argument, "unknown forward kind '" + kind + "' (series, point, flux)");
    }
  }
  const std::string nn = cfg.value("noise_norm", std::string("sup"));
  dsr::require(nn == "sup" || nn == "l2", dsr::Errc::invalid_argument, "noise_norm must be 'sup' or 'l2'");
  dsr::DirichletSample s = dsr::sample(truth, times, T, real_or(cfg, "epsilon", Real(0)),
                                       nn == "sup" ? dsr::NoiseNorm::sup : dsr::NoiseNorm::l2, resolve_seed(cfg, opt));
  dsr::write_sample(s, path);
  return {{"points", s.times.size()}, {"csv", path}, {"sidecar", dsr::sidecar_path(path)}};
}

Json experiment(const Json& cfg_json, const dsr_options* opt, const char* out_path) {
  Json j = cfg_json;
  if (opt && opt->precision_bits > 0) j["precision_bits"] = opt->precision_bits;
  if (opt && opt->has_seed) j["seed"] = opt->seed;
  if (opt && opt->threads > 0) j["threads"] = opt->threads;
  dsr::ExperimentConfig cfg = dsr::experiment_from_json(j);
  if (out_path) cfg.output = out_path;
  dsr::require(!cfg.output.empty(), dsr::Errc::invalid_argument, "experiment needs an output path");
  const auto records = dsr::run_experiment(cfg);
  std::vector<dsr::RateFit> fits;
  Json fit_errors = Json::object();
  for (auto model : {dsr::RateModel::log, dsr::RateModel::doublelog, dsr::RateModel::holder}) {
    try {
      fits.push_back(dsr::fit_rate(records, model));
    } catch (const dsr::Error& e) {
      fit_errors[dsr::to_string(model)] = e.what();
    }
  }
  dsr::export_experiment(records, fits, cfg, cfg.output);
  size_t failed = 0;
  for (const auto& r : records) failed += r.status != "ok";
  Json fj = Json::array();
  for (const auto& f : fits) fj.push_back(dsr::fit_to_json(f));
  Json out{{"records", records.size()}, {"failed", failed}, {"fits", fj}, {"csv", cfg.output},
           {"sidecar", dsr::sidecar_path(cfg.output)}};
  if (!fit_errors.empty()) out["fit_errors"] = fit_errors;
  return out;
}

}  // namespace

extern "C" {

const char* dsr_version(void) { return "1.0.0"; }

const char* dsr_last_error(void) { return g_last_error.c_str(); }

const char* dsr_status_name(dsr_status s) {
  switch (s) {
    case DSR_OK:
      return "ok";
    case DSR_INVALID_ARGUMENT:
      return "invalid_argument";
    case DSR_DOMAIN:
      return "domain";
    case DSR_STRUCTURAL:
      return "structural";
    case DSR_ILL_CONDITIONED:
      return "ill_conditioned";
    case DSR_PRECISION:
      return "precision";
    case DSR_REFUSED:
      return "refused";
    case DSR_INTERPOLATION:
      return "interpolation";
    case DSR_IO:
      return "io";
    default:
      return "internal";
  }
}

void dsr_string_free(char* s) { std::free(s); }

dsr_status dsr_set_precision(int bits) {
  return guarded([&] {
    dsr::require(bits >= 16, dsr::Errc::invalid_argument, "precision must be at least 16 bits");
    dsr::set_precision_bits(bits);
  });
}

int dsr_get_precision(void) { return dsr::precision_bits(); }

dsr_status dsr_eigen_power(const char* alpha, const char* mu, size_t count, dsr_eigen** out) {
  return guarded([&] {
    need(alpha, "alpha");
    need(mu, "mu");
    need(out, "out");
    *out = new dsr_eigen{dsr::EigenvalueSequence::power(Real(std::string_view(alpha)), Real(std::string_view(mu)), count)};
  });
}

dsr_status dsr_eigen_from_json(const char* json, dsr_eigen** out) {
  return guarded([&] {
    need(out, "out");
    *out = new dsr_eigen{dsr::eigen_from_json(parse(json))};
  });
}

size_t dsr_eigen_size(const dsr_eigen* s) { return s ? s->seq.size() : 0; }

dsr_status dsr_eigen_value(const dsr_eigen* s, size_t k, char** out) {
  return guarded([&] {
    need(s, "sequence");
    need(out, "out");
    *out = dup(s->seq.at(k).str());
  });
}

dsr_status dsr_eigen_to_json(const dsr_eigen* s, char** out) {
  return guarded([&] {
    need(s, "sequence");
    need(out, "out");
    *out = dup(dsr::eigen_to_json(s->seq).dump());
  });
}

void dsr_eigen_free(dsr_eigen* s) { delete s; }

dsr_status dsr_family_build(const dsr_eigen* s, const char* T, size_t N, int precision_bits, dsr_family** out) {
  return guarded([&] {
    need(s, "sequence");
    need(T, "T");
    need(out, "out");
    const int bits = precision_bits > 0 ? precision_bits : dsr::precision_bits();
    dsr::PrecisionScope scope(bits);
    const std::string_view tv(T);
    const Real t = tv == "inf" ? dsr::infinity() : Real(tv);
    *out = new dsr_family{dsr::build_family(s->seq, t, N, bits)};
  });
}

dsr_status dsr_family_residual(const dsr_family* f, char** out) {
  return guarded([&] {
    need(f, "family");
    need(out, "out");
    *out = dup(f->fam.residual.str());
  });
}

dsr_status dsr_family_psi_norm(const dsr_family* f, size_t n, char** out) {
  return guarded([&] {
    need(f, "family");
    need(out, "out");
    dsr::require(n >= 1 && n <= f->fam.N, dsr::Errc::invalid_argument, "psi index out of range");
    *out = dup(f->fam.psi_norms[n - 1].str());
  });
}

dsr_status dsr_family_to_json(const dsr_family* f, char** out) {
  return guarded([&] {
    need(f, "family");
    need(out, "out");
    *out = dup(dsr::family_to_json(f->fam).dump());
  });
}

void dsr_family_free(dsr_family* f) { delete f; }

dsr_status dsr_sensor_new(const char* expr, const char* mu, dsr_sensor** out) {
  return guarded([&] {
    need(expr, "expression");
    need(out, "out");
    const Real m = mu ? Real(std::string_view(mu)) : Real(1);
    *out = new dsr_sensor{dsr::explicit_point(expr, m)};
  });
}

dsr_status dsr_sensor_verify(const dsr_sensor* p, size_t K, int* pass, char** report_json) {
  return guarded([&] {
    need(p, "sensor");
    const dsr::SensorCheck c = dsr::verify_point(p->pt, K);
    if (pass) *pass = c.pass ? 1 : 0;
    if (report_json) *report_json = dup(dsr::sensor_check_to_json(p->pt, c, K).dump());
  });
}

void dsr_sensor_free(dsr_sensor* p) { delete p; }

dsr_status dsr_forward(const char* config_json, const dsr_options* opt, const char* out_csv_path, char** summary_json) {
  return guarded([&] {
    need(out_csv_path, "output path");
    Json out = forward(parse(config_json), opt, out_csv_path);
    if (summary_json) *summary_json = dup(out.dump());
  });
}

dsr_status dsr_recover(const char* config_json, const dsr_options* opt, char** report_json) {
  return guarded([&] {
    need(report_json, "out");
    *report_json = dup(recover(parse(config_json), opt).dump(2));
  });
}

dsr_status dsr_sensor_check(const char* expr, const char* mu, size_t K, const dsr_options* opt, char** report_json) {
  return guarded([&] {
    need(expr, "expression");
    need(report_json, "out");
    const int bits = opt && opt->precision_bits > 0 ? opt->precision_bits : 256;
    dsr::PrecisionScope scope(bits);
    const Real m = mu ? Real(std::string_view(mu)) : Real(1);
    const dsr::SensorPoint pt = dsr::explicit_point(expr, m);
    *report_json = dup(dsr::sensor_check_to_json(pt, dsr::verify_point(pt, K), K).dump(2));
  });
}

dsr_status dsr_experiment(const char* config_json, const dsr_options* opt, const char* out_csv_path,
                          char** summary_json) {
  return guarded([&] {
    Json out = experiment(parse(config_json), opt, out_csv_path);
    if (summary_json) *summary_json = dup(out.dump(2));
  });
}

dsr_status dsr_fit(const char* records_csv_path, const char* model, char** fit_json) {
  return guarded([&] {
    need(records_csv_path, "records path");
    need(model, "model");
    need(fit_json, "out");
    dsr::PrecisionScope scope(256);
    const auto records = dsr::import_records(records_csv_path);
    *fit_json = dup(dsr::fit_to_json(dsr::fit_rate(records, dsr::model_from_string(model))).dump(2));
  });
}

}  // extern "C"
