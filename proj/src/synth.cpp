#include "confforge/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "confforge/conditional.hpp"
#include "confforge/conformal.hpp"
#include "confforge/error.hpp"
#include "confforge/kernels.hpp"
#include "confforge/metrics.hpp"
#include "confforge/parallel.hpp"
#include "confforge/rng.hpp"

namespace confforge {

SynthConfig resolve_synth_config(SynthConfig config) {
  if (config.n_cal < 1 || config.n_test < 1 || config.trials < 1) {
    throw Error(errc::invalid_config,
                "n_cal, n_test and trials must be >= 1");
  }
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw Error(errc::invalid_alpha, "alpha must be in (0, 1)");
  }
  if (config.groups.empty()) {
    GroupSpec g;
    g.name = "all";
    g.count = config.n_cal + config.n_test;
    config.groups.push_back(g);
  }
  long long total = 0;
  for (const auto& g : config.groups) {
    if (g.count < 1) {
      throw Error(errc::invalid_config,
                  "group '" + g.name + "' must have count >= 1");
    }
    if (!(g.sigma_base > 0.0) || !(g.sigma_base + g.sigma_slope > 0.0)) {
      throw Error(errc::invalid_config,
                  "group '" + g.name + "' noise scale must stay positive");
    }
    if (!(g.misreport > 0.0) || !(g.misreport + g.misreport_slope > 0.0)) {
      throw Error(errc::invalid_config,
                  "group '" + g.name + "' misreport factor must stay positive");
    }
    total += g.count;
  }
  if (total != static_cast<long long>(config.n_cal) + config.n_test) {
    throw Error(errc::invalid_config,
                "group counts sum to " + std::to_string(total) +
                    " but n_cal + n_test = " +
                    std::to_string(config.n_cal + config.n_test));
  }
  if (config.min_group_size < 1 || config.min_bin_size < 1 ||
      config.max_bins < 1) {
    throw Error(errc::invalid_config,
                "min_group_size, min_bin_size and max_bins must be >= 1");
  }
  return config;
}

std::vector<RegressionRecord> gen_heteroscedastic(const SynthConfig& config,
                                                  int trial_index) {
  Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(trial_index)));
  std::vector<RegressionRecord> records;
  records.reserve(static_cast<std::size_t>(config.n_cal + config.n_test));
  for (const auto& g : config.groups) {
    for (int i = 0; i < g.count; ++i) {
      const double u = rng.next_unit();
      const double z = rng.next_normal();
      const double f = 2.0 * u - 1.0;
      const double sigma_true = g.sigma_base + g.sigma_slope * u;
      RegressionRecord rec;
      rec.id = "t" + std::to_string(trial_index) + ":" + g.name + ":" +
               std::to_string(i);
      rec.group = g.name;
      rec.y_true = f + sigma_true * z;
      rec.y_hat = f + g.bias;
      rec.uncertainty =
          SigmaEstimate{sigma_true * (g.misreport + g.misreport_slope * u)};
      rec.attrs["latent"] = u;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

namespace {

struct TrialOutcome {
  double coverage = 0.0;
  double q_hat = 0.0;
  std::map<std::string, KeyCoverage> by_group;
  std::map<int, KeyCoverage> by_bin;
};

TrialOutcome run_trial(const SynthConfig& config, int trial_index) {
  std::vector<RegressionRecord> all = gen_heteroscedastic(config, trial_index);
  const std::size_t n = all.size();
  const std::size_t n_cal = static_cast<std::size_t>(config.n_cal);

  // The calibration subset comes from its own stream so the draw stays
  // stable if the generator ever changes how many values it consumes.
  Rng pick(mix_seed(config.seed ^ 0x5DEECE66DULL,
                    static_cast<std::uint64_t>(trial_index)));
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  pick.partial_shuffle(idx, n_cal);
  std::vector<std::size_t> cal_idx(idx.begin(), idx.begin() + n_cal);
  std::sort(cal_idx.begin(), cal_idx.end());
  std::vector<std::size_t> test_idx(idx.begin() + n_cal, idx.end());
  std::sort(test_idx.begin(), test_idx.end());

  std::vector<RegressionRecord> cal;
  cal.reserve(cal_idx.size());
  for (std::size_t i : cal_idx) cal.push_back(all[i]);
  std::vector<RegressionRecord> test;
  test.reserve(test_idx.size());
  for (std::size_t i : test_idx) test.push_back(all[i]);

  const std::vector<double> cal_scores = kernels::record_scores(
      cal, config.alpha, ScoreKind::symmetric, config.eps_delta, 1);

  TrialOutcome out;
  out.q_hat = conformal_quantile(cal_scores, config.alpha);

  std::vector<double> test_y(test.size());
  std::vector<std::string> test_groups(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    test_y[i] = *test[i].y_true;
    test_groups[i] = test[i].group;
  }

  std::vector<PredictionInterval> intervals;
  if (config.scheme == CalibrationScheme::pooled) {
    const std::vector<double> shared{out.q_hat};
    intervals = kernels::intervals_at(test, shared, config.alpha,
                                      ScoreKind::symmetric, config.eps_delta,
                                      1);
  } else if (config.scheme == CalibrationScheme::grouped) {
    const GroupedCalibrator grouped = fit_grouped(
        cal, config.alpha, ScoreKind::symmetric, config.min_group_size,
        /*unseen_group_fallback=*/true, config.eps_delta);
    intervals.reserve(test.size());
    for (const auto& rec : test) {
      intervals.push_back(predict_grouped(grouped, rec));
    }
  } else {
    const BinPartition bins = partition_bins(
        cal, BinAttribute::uncertainty(), config.min_bin_size, config.alpha,
        ScoreKind::symmetric, config.max_bins, config.eps_delta);
    std::vector<int> assigned(test.size());
    intervals.reserve(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
      assigned[i] = assign_bin(bins, test[i]);
      intervals.push_back(predict_binned(bins, test[i]));
    }
    out.by_bin = conditional_coverage(assigned, intervals, test_y);
  }

  const std::int64_t covered =
      kernels::covered_count(intervals, test_y, 1);
  out.coverage =
      static_cast<double>(covered) / static_cast<double>(test.size());
  out.by_group = conditional_coverage(test_groups, intervals, test_y);
  return out;
}

ExperimentResult run_experiment(const SynthConfig& raw, int threads,
                                bool serial) {
  const SynthConfig config = resolve_synth_config(raw);
  const int trials = config.trials;
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
  std::vector<std::string> failures(static_cast<std::size_t>(trials));

  const int nt = serial ? 1 : (threads > 0 ? threads : effective_threads());
#pragma omp parallel for num_threads(nt) schedule(dynamic) if (nt > 1)
  for (int t = 0; t < trials; ++t) {
    try {
      outcomes[static_cast<std::size_t>(t)] = run_trial(config, t);
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(t)] = e.what();
    }
  }
  for (int t = 0; t < trials; ++t) {
    if (!failures[static_cast<std::size_t>(t)].empty()) {
      throw Error(errc::degenerate_input,
                  "trial " + std::to_string(t) + " failed: " +
                      failures[static_cast<std::size_t>(t)]);
    }
  }

  ExperimentResult result;
  result.trial_coverage.resize(static_cast<std::size_t>(trials));
  result.trial_q_hat.resize(static_cast<std::size_t>(trials));
  double cov_sum = 0.0;
  double q_sum = 0.0;
  std::map<std::string, std::pair<double, int>> group_acc;
  std::map<int, std::pair<double, int>> bin_acc;
  for (int t = 0; t < trials; ++t) {
    const TrialOutcome& out = outcomes[static_cast<std::size_t>(t)];
    result.trial_coverage[static_cast<std::size_t>(t)] = out.coverage;
    result.trial_q_hat[static_cast<std::size_t>(t)] = out.q_hat;
    cov_sum += out.coverage;
    q_sum += out.q_hat;
    for (const auto& [label, kc] : out.by_group) {
      auto& [sum, count] = group_acc[label];
      sum += kc.value;
      count += 1;
    }
    for (const auto& [bin, kc] : out.by_bin) {
      auto& [sum, count] = bin_acc[bin];
      sum += kc.value;
      count += 1;
    }
  }
  result.mean_coverage = cov_sum / static_cast<double>(trials);
  result.mean_q_hat = q_sum / static_cast<double>(trials);
  for (const auto& [label, acc] : group_acc) {
    result.group_coverage[label] = acc.first / static_cast<double>(acc.second);
  }
  for (const auto& [bin, acc] : bin_acc) {
    result.bin_coverage[bin] = acc.first / static_cast<double>(acc.second);
  }
  if (trials > 1) {
    double ss = 0.0;
    for (double c : result.trial_coverage) {
      const double d = c - result.mean_coverage;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(trials - 1));
    result.ci_halfwidth = 3.0 * sd / std::sqrt(static_cast<double>(trials));
  }
  return result;
}

}  // namespace

ExperimentResult run_coverage_experiment(const SynthConfig& config,
                                         int threads) {
  return run_experiment(config, threads, /*serial=*/false);
}

ExperimentResult run_coverage_experiment_serial(const SynthConfig& config) {
  return run_experiment(config, 0, /*serial=*/true);
}

}  // namespace confforge
