// SPDX-License-Identifier: Apache-2.0
//
// JSON and CSV serialization. Reals travel as round-trip decimal strings;
// readers also accept JSON numbers.
#pragma once

#include <string>

#include <json.hpp>

#include "dsr/lab.hpp"

namespace dsr {

using Json = nlohmann::json;

Json real_to_json(const Real& x);
Real real_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json eigen_to_json(const EigenvalueSequence& s);
/// {"family": "power", "alpha", "mu", "count"} or {"values": [...]}, optional "gap"/"asymptotic".
EigenvalueSequence eigen_from_json(const Json& j);

Json datum_to_json(const InitialDatum& f);
InitialDatum datum_from_json(const Json& j);

/// CSV `t,value` and the sidecar {epsilon, noise_norm, T, seed}.
std::string sample_csv(const DirichletSample& s);
Json sample_sidecar(const DirichletSample& s);
DirichletSample sample_from_text(const std::string& csv, const Json& sidecar);
/// Writes `path` and the sidecar next to it with extension .json.
void write_sample(const DirichletSample& s, const std::string& path);
DirichletSample read_sample(const std::string& path);
std::string sidecar_path(const std::string& path);

Json family_to_json(const BiorthoFamily& fam);
BiorthoFamily family_from_json(const Json& j);

Json report_to_json(const RecoveryReport& r);
Json inversion_to_json(const InversionResult& r);
Json sensor_check_to_json(const SensorPoint& pt, const SensorCheck& c, size_t K);

ExperimentConfig experiment_from_json(const Json& j);
Json experiment_to_json(const ExperimentConfig& c);
Json fit_to_json(const RateFit& f);

/// Records CSV at `path`, fits and config echo at the sidecar path.
void export_experiment(const std::vector<ExperimentRecord>& records, const std::vector<RateFit>& fits,
                       const ExperimentConfig& cfg, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace dsr
