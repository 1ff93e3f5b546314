#include <cmath>
#include <set>

#include "doctest.h"

#include "confforge/error.hpp"
#include "confforge/synth.hpp"

using namespace confforge;

namespace {

SynthConfig base_config() {
  SynthConfig config;
  config.n_cal = 999;
  config.n_test = 500;
  config.trials = 60;
  config.alpha = 0.1;
  config.seed = 42;
  return resolve_synth_config(config);
}

}  // namespace

TEST_CASE("resolve_synth_config fills a default group and checks counts") {
  const SynthConfig config = base_config();
  REQUIRE(config.groups.size() == 1);
  CHECK(config.groups[0].count == config.n_cal + config.n_test);

  SynthConfig bad = config;
  bad.groups[0].count = 10;
  CHECK_THROWS_AS(resolve_synth_config(bad), Error);

  SynthConfig neg = config;
  neg.groups[0].sigma_base = -1.0;
  CHECK_THROWS_AS(resolve_synth_config(neg), Error);

  SynthConfig alpha = config;
  alpha.alpha = 1.0;
  CHECK_THROWS_AS(resolve_synth_config(alpha), Error);
}

TEST_CASE("gen_heteroscedastic is deterministic per trial and seed") {
  const SynthConfig config = base_config();
  const auto a = gen_heteroscedastic(config, 3);
  const auto b = gen_heteroscedastic(config, 3);
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() ==
          static_cast<std::size_t>(config.n_cal + config.n_test));
  bool identical = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    identical = identical && *a[i].y_true == *b[i].y_true &&
                a[i].y_hat == b[i].y_hat;
  }
  CHECK(identical);
  const auto c = gen_heteroscedastic(config, 4);
  CHECK(*a[0].y_true != *c[0].y_true);
}

TEST_CASE("generated records carry the latent attribute and group label") {
  SynthConfig config = base_config();
  config.groups[0].name = "seg";
  const auto records = gen_heteroscedastic(config, 0);
  std::set<std::string> ids;
  for (const auto& rec : records) {
    CHECK(rec.group == "seg");
    const double u = rec.attrs.at("latent");
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    ids.insert(rec.id);
  }
  CHECK(ids.size() == records.size());
}

TEST_CASE("pooled coverage lands in the finite-sample band") {
  // n_cal = 999, alpha = 0.1: coverage in [0.9, 0.901] in expectation;
  // the Monte Carlo band below allows for trial noise.
  const SynthConfig config = base_config();
  const ExperimentResult result = run_coverage_experiment(config);
  CHECK(result.mean_coverage > 0.88);
  CHECK(result.mean_coverage < 0.92);
  CHECK(result.trial_coverage.size() == 60);
  CHECK(result.trial_q_hat.size() == 60);
  REQUIRE(result.ci_halfwidth.has_value());
  CHECK(*result.ci_halfwidth > 0.0);
  CHECK(*result.ci_halfwidth < 0.02);
}

TEST_CASE("experiment results are identical for any thread count") {
  SynthConfig config = base_config();
  config.trials = 12;
  const ExperimentResult serial = run_coverage_experiment_serial(config);
  for (int threads : {1, 2, 4}) {
    const ExperimentResult parallel = run_coverage_experiment(config, threads);
    CHECK(parallel.mean_coverage == serial.mean_coverage);
    CHECK(parallel.mean_q_hat == serial.mean_q_hat);
    CHECK(parallel.trial_coverage == serial.trial_coverage);
    CHECK(parallel.trial_q_hat == serial.trial_q_hat);
  }
}

TEST_CASE("grouped scheme reports per-group coverage") {
  SynthConfig config;
  config.n_cal = 2000;
  config.n_test = 1000;
  config.trials = 15;
  config.seed = 9;
  config.scheme = CalibrationScheme::grouped;
  GroupSpec honest;
  honest.name = "honest";
  honest.count = 1500;
  GroupSpec timid;
  timid.name = "timid";
  timid.count = 1500;
  timid.misreport = 0.4;
  config.groups = {honest, timid};
  const ExperimentResult result =
      run_coverage_experiment(resolve_synth_config(config));
  REQUIRE(result.group_coverage.count("honest") == 1);
  REQUIRE(result.group_coverage.count("timid") == 1);
  CHECK(std::fabs(result.group_coverage.at("honest") - 0.9) < 0.05);
  CHECK(std::fabs(result.group_coverage.at("timid") - 0.9) < 0.05);
}

TEST_CASE("mondrian scheme reports per-bin coverage") {
  SynthConfig config;
  config.n_cal = 3000;
  config.n_test = 1000;
  config.trials = 10;
  config.seed = 10;
  config.scheme = CalibrationScheme::mondrian;
  config.min_bin_size = 500;
  GroupSpec spread;
  spread.name = "all";
  spread.count = 4000;
  spread.sigma_slope = 2.0;
  spread.misreport_slope = 1.0;
  spread.misreport = 0.5;
  config.groups = {spread};
  const ExperimentResult result =
      run_coverage_experiment(resolve_synth_config(config));
  CHECK(result.bin_coverage.size() >= 2);
  for (const auto& [bin, cov] : result.bin_coverage) {
    CHECK(std::fabs(cov - 0.9) < 0.06);
  }
}
