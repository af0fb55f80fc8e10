#include <doctest.h>

#include <filesystem>

#include "dsr/error.hpp"
#include "dsr/io.hpp"

using namespace dsr;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dsr_unit_io";
  fs::create_directories(dir);
  return dir / name;
}
}  // namespace

TEST_CASE("reals travel as exact decimal strings") {
  PrecisionScope s(256);
  const Real x = pi() / 7;
  const Json j = real_to_json(x);
  CHECK(j.is_string());
  CHECK(real_from_json(j) == x);
  CHECK(real_from_json(Json(0.25)) == Real(0.25));
  CHECK(vector_from_json(vector_to_json({Real(1), x})) == Vector{Real(1), x});
}

TEST_CASE("exponent sequences round-trip") {
  PrecisionScope s(256);
  const auto p = EigenvalueSequence::power(Real(0.75), Real(2), 9);
  const auto q = eigen_from_json(eigen_to_json(p));
  CHECK(q.values() == p.values());
  CHECK(q.family().has_value());
  const auto e = eigen_from_json(Json::parse(R"({"values": ["1", "3", "7"]})"));
  CHECK(e.size() == 3);
  CHECK(e.at(3) == 7);
  CHECK_THROWS(eigen_from_json(Json::parse(R"({"values": ["3", "1"]})")));
  CHECK_THROWS(eigen_from_json(Json::parse(R"({"family": "cubic"})")));
}

TEST_CASE("initial data round-trip") {
  InitialDatum f;
  f.coeffs = CoefficientSequence(Vector{Real(1), Real("-0.3")});
  f.mu = Real(1.5);
  f.regularity = Regularity{Real(1), Real(3)};
  const InitialDatum g = datum_from_json(datum_to_json(f));
  CHECK(g.coeffs.entries() == f.coeffs.entries());
  CHECK(g.mu == f.mu);
  REQUIRE(g.regularity.has_value());
  CHECK(g.regularity->m == 3);
}

TEST_CASE("samples and sidecars") {
  const auto seq = EigenvalueSequence::power(Real(1), Real(1), 4);
  Vector times{Real(0), Real(0.5), Real(1)};
  const auto s = sample(dirichlet_evaluator(CoefficientSequence::unit(1), seq), times, Real(1), Real("1e-3"),
                        NoiseNorm::sup, 42);
  const fs::path p = scratch("s.csv");
  write_sample(s, p.string());
  CHECK(sidecar_path(p.string()) == scratch("s.json").string());
  CHECK(fs::exists(scratch("s.json")));
  const auto r = read_sample(p.string());
  CHECK(r.times == s.times);
  CHECK(r.values == s.values);
  CHECK(r.noise_level == s.noise_level);
  CHECK(r.seed == s.seed);
  fs::remove(scratch("s.json"));
  const auto bare = read_sample(p.string());
  CHECK(bare.noise_level == 0);
  CHECK_THROWS(sample_from_text("t,value\n0,1\nx,2\n", Json::object()));
  try {
    read_sample(scratch("missing.csv").string());
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io);
  }
}

TEST_CASE("families round-trip") {
  const auto seq = EigenvalueSequence::power(Real(1), Real(1), 6);
  const BiorthoFamily fam = build_family(seq, Real(1), 4, 256);
  const BiorthoFamily back = family_from_json(family_to_json(fam));
  CHECK(back.N == 4);
  CHECK(back.T == fam.T);
  for (size_t i = 0; i < 4; ++i)
    for (size_t k = 0; k < 4; ++k) CHECK(back.combo(i, k) == fam.combo(i, k));
  CHECK(back.psi_norms == fam.psi_norms);
}

TEST_CASE("experiment config round-trips") {
  ExperimentConfig c;
  c.scenario = Scenario::boundary_inversion;
  c.method = Method::peeling;
  c.noise_grid = {1e-3, 1e-9};
  c.trials = 4;
  c.section_size = 10;
  c.seed = 99;
  const ExperimentConfig d = experiment_from_json(experiment_to_json(c));
  CHECK(d.scenario == c.scenario);
  CHECK(d.method == c.method);
  CHECK(d.noise_grid == c.noise_grid);
  CHECK(d.trials == 4);
  CHECK(d.section_size == c.section_size);
  CHECK(d.seed == 99);
  CHECK_THROWS(experiment_from_json(Json::parse(R"({"scenario": "nope"})")));
}

TEST_CASE("reports serialize their fields") {
  RecoveryReport r;
  r.method = Method::vandermonde;
  r.estimate = CoefficientSequence(Vector{Real(1)});
  r.truncation = 1;
  r.certified_bound = Real("1e-5");
  r.diagnostics["x"] = Real(2);
  r.notes["n"] = "text";
  const Json j = report_to_json(r);
  CHECK(j.at("method") == "vandermonde");
  CHECK(j.at("N") == 1);
  CHECK(j.at("notes").at("n") == "text");
  CHECK(real_from_json(j.at("certified_bound")) == Real("1e-5"));
}
