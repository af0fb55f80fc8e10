#include <doctest.h>

#include <cmath>

#include "dsr/lab.hpp"

using namespace dsr;

namespace {
std::vector<ExperimentRecord> synthetic(const std::function<double(double)>& err, const std::vector<double>& grid,
                                        size_t trials) {
  std::vector<ExperimentRecord> out;
  for (double e : grid)
    for (size_t t = 0; t < trials; ++t) {
      ExperimentRecord r;
      r.epsilon = Real(e);
      r.trial = t;
      r.seed = t;
      r.error = Real(err(e) * (1 + 0.01 * static_cast<double>(t)));
      out.push_back(r);
    }
  return out;
}

const std::vector<double> kGrid{1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
}  // namespace

TEST_CASE("noise function is seeded and bounded") {
  const auto a = noise_function(4, Real(1)), b = noise_function(4, Real(1)), c = noise_function(5, Real(1));
  bool differs = false;
  for (int i = 0; i <= 500; ++i) {
    const Real t = Real(i) / 500;
    CHECK(a(t) == b(t));
    CHECK(abs(a(t)) <= 1);
    differs = differs || a(t) != c(t);
  }
  CHECK(differs);
}

TEST_CASE("random data lie in their a priori balls") {
  ExperimentConfig cfg;
  cfg.support = 12;
  cfg.m = 2;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = make_datum(cfg, seed);
    CHECK(a.support() <= 12);
    CHECK(norm(a, NormKind::H(Real(cfg.theta))) <= Real(2) * (1 + 1e-12));
  }
  cfg.datum = DatumKind::holder;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = make_datum(cfg, seed);
    CHECK(norm(a, NormKind::L1Exp(Real(cfg.holder_alpha), Real(cfg.holder_beta))) <= Real(2) * (1 + 1e-12));
  }
  CHECK(make_datum(cfg, 3).entries() == make_datum(cfg, 3).entries());
}

TEST_CASE("rate fits recover planted exponents") {
  const auto lg = synthetic([](double e) { return 2 / std::fabs(std::log(e)); }, kGrid, 5);
  const RateFit f = fit_rate(lg, RateModel::log);
  CHECK(f.exponent == doctest::Approx(1).epsilon(1e-6));
  CHECK(f.C == doctest::Approx(2 * 1.02).epsilon(1e-6));
  CHECK(f.r2 > 0.999999);
  CHECK(f.points == kGrid.size());

  const auto hd = synthetic([](double e) { return 3 * std::pow(e, 0.5); }, kGrid, 3);
  const RateFit h = fit_rate(hd, RateModel::holder);
  CHECK(h.exponent == doctest::Approx(0.5).epsilon(1e-6));

  const auto dl = synthetic([](double e) { return std::pow(std::log(std::fabs(std::log(e))), -0.75); }, kGrid, 1);
  CHECK(fit_rate(dl, RateModel::doublelog).exponent == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("too few usable epsilons is a degenerate fit") {
  const auto r = synthetic([](double) { return 0.1; }, {1e-2, 1e-4}, 2);
  CHECK_THROWS(fit_rate(r, RateModel::log));
}

TEST_CASE("calibrated constant is the envelope; violations use medians") {
  auto recs = synthetic([](double e) { return 1 / std::fabs(std::log(e)); }, kGrid, 3);
  const double C = calibrate_constant(recs, RateModel::log, 1);
  for (const auto& r : recs)
    CHECK(r.error.to_double() <= C * model_rate(RateModel::log, 1, r.epsilon.to_double()) * (1 + 1e-12));
  CHECK(bound_violations(recs, RateModel::log, 1, C).empty());
  CHECK(bound_violations(recs, RateModel::log, 1, 0.5 * C).size() == kGrid.size());
  const auto med = median_errors(recs);
  CHECK(med.front().first == 1e-12);
  CHECK(med.size() == kGrid.size());
}

TEST_CASE("record CSV round-trips") {
  auto recs = synthetic([](double e) { return e; }, {1e-2, 1e-3}, 2);
  recs[1].status = "refused: bad, worse";
  recs[1].error = Real(0) / Real(0);
  recs[2].N = 7;
  const std::string csv = records_to_csv(recs);
  CHECK(csv.rfind("epsilon,trial,seed,error,N,status\n", 0) == 0);
  const auto back = records_from_csv(csv);
  REQUIRE(back.size() == recs.size());
  for (size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].epsilon == recs[i].epsilon);
    CHECK(back[i].trial == recs[i].trial);
    CHECK(back[i].N == recs[i].N);
    if (!recs[i].error.is_nan()) CHECK(back[i].error == recs[i].error);
  }
  CHECK(back[1].error.is_nan());
  CHECK(back[1].status == "refused: bad; worse");
  CHECK(select_seeds(recs, 1, 1).size() == 2);
}

TEST_CASE("experiments are reproducible and thread-count independent") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::series_recovery;
  cfg.support = 4;
  cfg.section_size = 6;
  cfg.noise_grid = {1e-3, 1e-6};
  cfg.trials = 2;
  cfg.seed = 11;
  const auto a = run_experiment(cfg);
  cfg.threads = 2;
  const auto b = run_experiment(cfg);
  CHECK(records_to_csv(a) == records_to_csv(b));
  REQUIRE(a.size() == 4);
  CHECK(a[0].epsilon < a[2].epsilon);
  CHECK(a[0].seed == 11);
  for (const auto& r : a) CHECK(r.status == "ok");
}

TEST_CASE("config validation and enum names") {
  ExperimentConfig cfg;
  cfg.noise_grid = {1e-2, 1e-1};
  CHECK_THROWS(cfg.check());
  cfg.noise_grid = {1e-2, 0};
  CHECK_NOTHROW(cfg.check());
  CHECK(scenario_from_string(to_string(Scenario::tensor_inversion)) == Scenario::tensor_inversion);
  CHECK(datum_from_string(to_string(DatumKind::holder)) == DatumKind::holder);
  CHECK(model_from_string(to_string(RateModel::doublelog)) == RateModel::doublelog);
  CHECK_THROWS(model_from_string("cubic"));
}
