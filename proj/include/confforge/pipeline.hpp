// Pipeline orchestration behind the CLI commands, exposed as library
// functions so tests drive the exact code the tool runs.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "confforge/conditional.hpp"
#include "confforge/io.hpp"
#include "confforge/quantile.hpp"
#include "confforge/record.hpp"
#include "confforge/report.hpp"
#include "confforge/scores.hpp"
#include "confforge/synth.hpp"

namespace confforge {

struct EvaluateConfig {
  std::string input;  // echoed into the report verbatim
  double alpha = 0.1;
  ScoreKind kind = ScoreKind::symmetric;
  int runs = 10;
  int cal_size = 1000;
  std::uint64_t seed = 0;
  bool stratify = true;
  std::optional<std::string> group_by;  // only "group" is supported
  // "quality", "uncertainty", or a named numeric attribute.
  std::optional<std::string> bin_attr;
  int min_group_size = 50;
  int min_bin_size = 200;
  int max_bins = 20;
  int ece_levels = 19;
  double eps_delta = 1e-8;
  bool allow_unbounded = false;
  bool clamp_zero_uncertainty = false;
  bool unseen_group_fallback = false;
};

struct EvaluateOutcome {
  EvalReport report;
  std::vector<IntervalRow> intervals;
};

BinAttribute parse_bin_attr(const std::string& text);

EvaluateOutcome run_evaluate(const EvaluateConfig& config,
                             const std::vector<RegressionRecord>& records);

struct CalibratePredictConfig {
  double alpha = 0.1;
  ScoreKind kind = ScoreKind::symmetric;
  std::optional<std::string> group_by;
  std::optional<std::string> bin_attr;
  int min_group_size = 50;
  int min_bin_size = 200;
  int max_bins = 20;
  double eps_delta = 1e-8;
  bool allow_unbounded = false;
  bool unseen_group_fallback = false;
};

struct PredictedRow {
  std::string id;
  std::string group;
  std::optional<int> bin;
  double q_hat;
  double lo;
  double hi;
};

struct CalibratePredictOutcome {
  std::vector<PredictedRow> rows;
  std::vector<std::string> warnings;
};

CalibratePredictOutcome run_calibrate_predict(
    const CalibratePredictConfig& config,
    const std::vector<RegressionRecord>& calibration,
    const std::vector<RegressionRecord>& prediction);

std::string write_predictions_csv(const CalibratePredictOutcome& outcome);

struct FitQuantileConfig {
  double tau = 0.1;  // the triple fits tau/2, 0.5, 1 - tau/2
  bool symmetric = false;
  FitHyper hyper;
  double eps_delta = 1e-8;
};

struct FitQuantileOutcome {
  QuantileTriple triple;
  std::vector<double> final_losses;  // last epoch mean loss per model
  int crossed_rows = 0;              // rows whose deltas were clamped
  std::vector<RegressionRecord> emitted;
};

// Fits the triple on the training table (features standardized
// internally, models saved in raw feature space) and emits heuristic
// records for the apply table.
FitQuantileOutcome run_fit_quantile(const FitQuantileConfig& config,
                                    const TrainingTable& train,
                                    const TrainingTable& apply);

// JSONL lines for emitted heuristic records.
std::string write_records_jsonl(const std::vector<RegressionRecord>& records);

// Simulation report (JSON) and per-trial CSV.
struct SimulateOutcome {
  SynthConfig config;
  ExperimentResult result;
};

std::string write_simulate_report_json(const SimulateOutcome& outcome);
std::string write_trials_csv(const ExperimentResult& result);

}  // namespace confforge
