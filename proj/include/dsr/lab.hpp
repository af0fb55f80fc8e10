// SPDX-License-Identifier: Apache-2.0
//
// Noise sweeps over recovery scenarios, stability-rate fits and record export.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsr/inverse_heat.hpp"

namespace dsr {

enum class Scenario { series_recovery, point_inversion, boundary_inversion, tensor_inversion };
enum class DatumKind { fixed, random, holder };

struct ExperimentConfig {
  Scenario scenario = Scenario::series_recovery;
  Method method = Method::biortho;
  // exponents (k/mu)^(2 alpha), or an explicit list for series recovery
  Real alpha = 1;
  Real mu = 1;
  size_t count = 64;
  std::optional<Vector> exponents;
  // datum: fixed coefficients, random in m B_{h^theta}, or random with sum exp(a n^b)|a_n| <= m
  DatumKind datum = DatumKind::random;
  Vector coefficients;
  size_t support = 8;
  double theta = 1;
  double m = 1;
  double holder_alpha = 1;
  double holder_beta = 2;
  // sweep
  std::vector<double> noise_grid{1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
  size_t trials = 10;
  uint64_t seed = 0;  // trial i uses seed + i
  int precision_bits = 256;
  Real T = 1;
  std::optional<std::vector<Interval>> B;
  std::optional<size_t> section_size;
  std::optional<size_t> modes;          // peeling
  std::optional<size_t> support_bound;  // peeling, vandermonde
  size_t N_max = 20;                    // vandermonde
  SensorStrategy sensor = SensorStrategy::golden;
  double eta = 1e-3;  // tensor
  size_t dim = 2;     // tensor
  size_t threads = 1;
  std::string output;

  void check() const;
};

struct ExperimentRecord {
  Real epsilon;
  size_t trial = 0;
  uint64_t seed = 0;
  Real error;  // nan when the trial failed
  size_t N = 0;
  double runtime = 0;  // seconds; not exported to CSV
  std::string status = "ok";
};

/// Deterministic under cfg.seed; trial failures are recorded, not thrown.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg);

/// Smooth perturbation with sup <= 1 on [0, T], fixed by seed.
SeriesEvaluator noise_function(uint64_t seed, const Real& T);
/// Random coefficients for one trial of the configured datum generator.
CoefficientSequence make_datum(const ExperimentConfig& cfg, uint64_t seed);

enum class RateModel { log, doublelog, holder };

struct RateFit {
  RateModel model = RateModel::log;
  double exponent = 0;  // theta, theta, or gamma
  double C = 0;
  double r2 = 0;
  bool degenerate = false;
  size_t points = 0;
};

/// rate(eps) of the model with the given exponent: |ln eps|^-e, (ln|ln eps|)^(-e/2), eps^e.
double model_rate(RateModel model, double exponent, double eps);
/// Least squares in linearizing coordinates on the median error per epsilon.
RateFit fit_rate(const std::vector<ExperimentRecord>& records, RateModel model);
/// Median error per positive epsilon, ascending in epsilon.
std::vector<std::pair<double, double>> median_errors(const std::vector<ExperimentRecord>& records);
/// Smallest C with error <= C rate(eps) for every finite record (worst-case envelope).
double calibrate_constant(const std::vector<ExperimentRecord>& records, RateModel model, double exponent);
/// Epsilons whose median error exceeds C rate(eps).
std::vector<double> bound_violations(const std::vector<ExperimentRecord>& records, RateModel model, double exponent,
                                     double C);

std::vector<ExperimentRecord> select_seeds(const std::vector<ExperimentRecord>& records, uint64_t lo, uint64_t hi);

/// CSV header epsilon,trial,seed,error,N,status; numbers as round-trip decimal strings.
std::string records_to_csv(const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> records_from_csv(const std::string& text);
void export_records(const std::vector<ExperimentRecord>& records, const std::string& path);
std::vector<ExperimentRecord> import_records(const std::string& path);

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);
std::string to_string(DatumKind d);
DatumKind datum_from_string(const std::string& s);
std::string to_string(RateModel m);
RateModel model_from_string(const std::string& s);

}  // namespace dsr
