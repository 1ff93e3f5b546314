// Synthetic heteroscedastic data and Monte Carlo coverage experiments
// used to verify the finite-sample guarantee end to end.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "confforge/record.hpp"
#include "confforge/scores.hpp"

namespace confforge {

// One population segment. Over a latent u ~ U(0, 1):
//   y      = f(u) + sigma_true(u) * z          with f(u) = 2u - 1
//   y_hat  = f(u) + bias
//   sigma  = sigma_true(u) * misreport(u)      (the reported scale)
// where sigma_true(u) = sigma_base + sigma_slope * u and
// misreport(u) = misreport + misreport_slope * u. A misreport of 1
// reports the true scale; below 1 the model is overconfident.
struct GroupSpec {
  std::string name;
  int count;
  double sigma_base = 1.0;
  double sigma_slope = 0.0;
  double bias = 0.0;
  double misreport = 1.0;
  double misreport_slope = 0.0;
};

enum class CalibrationScheme { pooled, grouped, mondrian };

struct SynthConfig {
  int n_cal = 1000;
  int n_test = 1000;
  int trials = 100;
  double alpha = 0.1;
  std::uint64_t seed = 0;
  std::vector<GroupSpec> groups;  // counts must sum to n_cal + n_test
  CalibrationScheme scheme = CalibrationScheme::pooled;
  int min_group_size = 50;
  int min_bin_size = 200;
  int max_bins = 20;
  double eps_delta = 1e-8;
};

// All records of one trial: per group (in listed order) count draws.
// The latent u lands in the record's attrs. Deterministic per
// (config.seed, trial_index).
std::vector<RegressionRecord> gen_heteroscedastic(const SynthConfig& config,
                                                  int trial_index);

struct ExperimentResult {
  double mean_coverage;
  std::optional<double> ci_halfwidth;  // 3 standard errors of the mean;
                                       // absent for a single trial
  double mean_q_hat;
  std::vector<double> trial_coverage;
  std::vector<double> trial_q_hat;
  std::map<std::string, double> group_coverage;  // mean over trials
  std::map<int, double> bin_coverage;  // mondrian scheme only
};

// For each trial: generate a dataset, draw a uniform calibration subset
// of n_cal records, calibrate per the scheme, and measure coverage on
// the held-out n_test records. Trials run in parallel; results are
// identical for any thread count.
ExperimentResult run_coverage_experiment(const SynthConfig& config,
                                         int threads = 0);

// Serial reference twin.
ExperimentResult run_coverage_experiment_serial(const SynthConfig& config);

// Validates counts, scales and scheme parameters; fills a single
// default group when none are given.
SynthConfig resolve_synth_config(SynthConfig config);

}  // namespace confforge
