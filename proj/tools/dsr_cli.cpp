// SPDX-License-Identifier: Apache-2.0
// dsr command line: forward, recover, sensor-check, experiment, fit.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "dsr/dsr.h"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int report(dsr_status s) {
  if (s != DSR_OK) std::cerr << "dsr: " << dsr_status_name(s) << ": " << dsr_last_error() << "\n";
  return static_cast<int>(s);
}

int emit(dsr_status s, char* text, const std::string& out) {
  if (s != DSR_OK) return report(s);
  std::string body(text ? text : "");
  dsr_string_free(text);
  if (body.empty() || body.back() != '\n') body += '\n';
  if (out.empty()) {
    std::cout << body;
  } else {
    std::ofstream os(out, std::ios::binary);
    if (!os) {
      std::cerr << "dsr: io: cannot write " << out << "\n";
      return DSR_IO;
    }
    os << body;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet-series coefficient recovery and heat-equation inversion"};
  app.require_subcommand(1);

  int precision_bits = 0;
  int threads = 0;
  uint64_t seed = 0;
  std::string global_config;
  app.add_option("--precision-bits", precision_bits, "Working precision in bits")->check(CLI::Range(16, 1 << 20));
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (noise, data generation)");
  app.add_option("--threads", threads, "Worker threads for experiments")->check(CLI::NonNegativeNumber);
  app.add_option("--config", global_config, "JSON config used when a subcommand gets none");

  std::string config, out;

  auto* fwd = app.add_subcommand("forward", "Sample a series, point measurement or boundary flux to CSV");
  fwd->add_option("--config", config, "Forward config JSON");
  fwd->add_option("--out", out, "Samples CSV (sidecar JSON written next to it)")->required();

  std::string channel, method;
  auto* rec = app.add_subcommand("recover", "Recover coefficients or an initial datum");
  rec->add_option("--channel", channel, "point, flux, tensor or series")
      ->check(CLI::IsMember({"point", "flux", "tensor", "series"}));
  rec->add_option("--method", method, "biortho, peeling or vandermonde")
      ->check(CLI::IsMember({"biortho", "peeling", "vandermonde"}));
  rec->add_option("--config", config, "Run config JSON");
  rec->add_option("--out", out, "Report JSON (stdout when omitted)");

  std::string x0 = "golden", mu = "1";
  size_t K = 0;
  auto* sc = app.add_subcommand("sensor-check", "Verify k|sin(k x0/mu)| > 0 for k <= K");
  sc->add_option("--x0", x0, "Sensor expression, e.g. golden, silver, pi/3, 1.25");
  sc->add_option("--mu", mu, "Interval scale mu");
  sc->add_option("--K", K, "Number of modes")->required()->check(CLI::PositiveNumber);
  sc->add_option("--out", out, "Report JSON (stdout when omitted)");

  auto* exp = app.add_subcommand("experiment", "Run a noise sweep and fit stability rates");
  exp->add_option("--config", config, "Experiment config JSON");
  exp->add_option("--out", out, "Records CSV (defaults to the config's output)");

  std::string records, model = "log";
  auto* fit = app.add_subcommand("fit", "Fit a stability-rate model to exported records");
  fit->add_option("--records", records, "Records CSV")->required();
  fit->add_option("--model", model, "log, doublelog or holder")->check(CLI::IsMember({"log", "doublelog", "holder"}));
  fit->add_option("--out", out, "Fit JSON (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  dsr_options opt{};
  opt.precision_bits = precision_bits;
  opt.has_seed = seed_opt->count() > 0;
  opt.seed = seed;
  opt.threads = threads;

  try {
    auto load = [&]() -> std::string {
      const std::string& path = config.empty() ? global_config : config;
      if (path.empty()) return "{}";
      return slurp(path);
    };
    char* text = nullptr;
    if (*fwd) {
      dsr_status s = dsr_forward(load().c_str(), &opt, out.c_str(), &text);
      return emit(s, text, "");
    }
    if (*rec) {
      nlohmann::json j = nlohmann::json::parse(load());
      if (!channel.empty()) j["channel"] = channel;
      if (!method.empty()) j["method"] = method;
      dsr_status s = dsr_recover(j.dump().c_str(), &opt, &text);
      return emit(s, text, out);
    }
    if (*sc) {
      dsr_status s = dsr_sensor_check(x0.c_str(), mu.c_str(), K, &opt, &text);
      const bool pass = s == DSR_OK && nlohmann::json::parse(text).value("pass", false);
      const int rc = emit(s, text, out);
      return rc != 0 ? rc : (pass ? 0 : DSR_REFUSED);
    }
    if (*exp) {
      dsr_status s = dsr_experiment(load().c_str(), &opt, out.empty() ? nullptr : out.c_str(), &text);
      return emit(s, text, "");
    }
    if (*fit) {
      dsr_status s = dsr_fit(records.c_str(), model.c_str(), &text);
      return emit(s, text, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "dsr: " << e.what() << "\n";
    return DSR_INVALID_ARGUMENT;
  }
  return 0;
}
