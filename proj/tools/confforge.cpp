// Command line front end: evaluate, calibrate-predict, simulate and
// fit-quantile over JSONL/CSV record files. All output files are
// byte-deterministic for a fixed input and seed.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "confforge/error.hpp"
#include "confforge/fmt.hpp"
#include "confforge/io.hpp"
#include "confforge/pipeline.hpp"
#include "confforge/synth.hpp"

namespace {

using namespace confforge;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(errc::io_error, "cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw Error(errc::io_error, "failed while writing '" + path + "'");
  }
  std::cout << "wrote " << path << "\n";
}

double parse_double_field(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty()) {
    throw Error(errc::invalid_config,
                "bad " + what + " value '" + text + "' in --group spec");
  }
  return v;
}

int parse_int_field(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty()) {
    throw Error(errc::invalid_config,
                "bad " + what + " value '" + text + "' in --group spec");
  }
  return static_cast<int>(v);
}

// name:count[:sigma_base[:sigma_slope[:bias[:misreport[:misreport_slope]]]]]
GroupSpec parse_group_spec(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    if (colon == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, colon - start));
    start = colon + 1;
  }
  if (parts.size() < 2 || parts.size() > 7 || parts[0].empty()) {
    throw Error(errc::invalid_config,
                "--group expects name:count[:sigma_base[:sigma_slope[:bias[:"
                "misreport[:misreport_slope]]]]], got '" +
                    text + "'");
  }
  GroupSpec spec;
  spec.name = parts[0];
  spec.count = parse_int_field(parts[1], "count");
  if (parts.size() > 2) {
    spec.sigma_base = parse_double_field(parts[2], "sigma_base");
  }
  if (parts.size() > 3) {
    spec.sigma_slope = parse_double_field(parts[3], "sigma_slope");
  }
  if (parts.size() > 4) spec.bias = parse_double_field(parts[4], "bias");
  if (parts.size() > 5) {
    spec.misreport = parse_double_field(parts[5], "misreport");
  }
  if (parts.size() > 6) {
    spec.misreport_slope = parse_double_field(parts[6], "misreport_slope");
  }
  return spec;
}

const std::map<std::string, ScoreKind> kKindNames{
    {"symmetric", ScoreKind::symmetric},
    {"asymmetric", ScoreKind::asymmetric}};
const std::map<std::string, CalibrationScheme> kSchemeNames{
    {"pooled", CalibrationScheme::pooled},
    {"grouped", CalibrationScheme::grouped},
    {"mondrian", CalibrationScheme::mondrian}};

struct EvaluateArgs {
  EvaluateConfig config;
  std::string report_path = "report.json";
  std::optional<std::string> intervals_path;
  std::optional<std::string> plot_dir;
};

int cmd_evaluate(const EvaluateArgs& args) {
  ValidateOptions vopts{args.config.clamp_zero_uncertainty,
                        args.config.eps_delta};
  const std::vector<RegressionRecord> records =
      read_records_file(args.config.input, vopts);
  const EvaluateOutcome outcome = run_evaluate(args.config, records);
  for (const std::string& w : outcome.report.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  std::cout << "mean conformal coverage over " << args.config.runs
            << " run(s): " << format_double(outcome.report.mean.coverage_conformal)
            << "\n";
  write_file(args.report_path, write_eval_report_json(outcome.report));
  if (args.intervals_path) {
    write_file(*args.intervals_path, write_intervals_csv(outcome.intervals));
  }
  if (args.plot_dir) {
    std::filesystem::create_directories(*args.plot_dir);
    const std::filesystem::path dir(*args.plot_dir);
    write_file((dir / "per_group.csv").string(),
               write_per_group_csv(outcome.report));
    write_file((dir / "per_bin.csv").string(),
               write_per_bin_csv(outcome.report));
  }
  return 0;
}

struct CalibratePredictArgs {
  CalibratePredictConfig config;
  std::string calibration_path;
  std::string predict_path;
  bool clamp_zero_uncertainty = false;
  std::string output_path = "intervals.csv";
};

int cmd_calibrate_predict(const CalibratePredictArgs& args) {
  ValidateOptions vopts{args.clamp_zero_uncertainty, args.config.eps_delta};
  const std::vector<RegressionRecord> calibration =
      read_records_file(args.calibration_path, vopts);
  const std::vector<RegressionRecord> prediction =
      read_records_file(args.predict_path, vopts);
  const CalibratePredictOutcome outcome =
      run_calibrate_predict(args.config, calibration, prediction);
  for (const std::string& w : outcome.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  std::cout << outcome.rows.size() << " interval(s) predicted\n";
  write_file(args.output_path, write_predictions_csv(outcome));
  return 0;
}

struct SimulateArgs {
  SynthConfig config;
  std::vector<std::string> group_specs;
  std::string report_path = "simulation.json";
  std::optional<std::string> trials_csv_path;
};

int cmd_simulate(SimulateArgs args) {
  for (const std::string& text : args.group_specs) {
    args.config.groups.push_back(parse_group_spec(text));
  }
  const SynthConfig config = resolve_synth_config(args.config);
  const ExperimentResult result = run_coverage_experiment(config);
  std::cout << "mean coverage over " << config.trials
            << " trial(s): " << format_double(result.mean_coverage) << "\n";
  if (result.ci_halfwidth) {
    std::cout << "monte carlo halfwidth: "
              << format_double(*result.ci_halfwidth) << "\n";
  }
  write_file(args.report_path, write_simulate_report_json({config, result}));
  if (args.trials_csv_path) {
    write_file(*args.trials_csv_path, write_trials_csv(result));
  }
  return 0;
}

struct FitQuantileArgs {
  FitQuantileConfig config;
  std::string train_path;
  std::optional<std::string> apply_path;
  std::string model_path = "quantile_triple.txt";
  std::string output_path = "quantile_records.jsonl";
};

int cmd_fit_quantile(const FitQuantileArgs& args) {
  const TrainingTable train = read_training_csv_file(args.train_path);
  const TrainingTable apply =
      args.apply_path ? read_training_csv_file(*args.apply_path) : train;
  const FitQuantileOutcome outcome =
      run_fit_quantile(args.config, train, apply);
  const double taus[3] = {args.config.tau / 2.0, 0.5,
                          1.0 - args.config.tau / 2.0};
  for (int m = 0; m < 3; ++m) {
    std::cout << "tau " << format_double(taus[m])
              << ": final mean pinball loss "
              << format_double(outcome.final_losses[m]) << "\n";
  }
  if (outcome.crossed_rows > 0) {
    std::cerr << "warning: " << outcome.crossed_rows
              << " row(s) had crossed or collapsed quantiles; deltas "
                 "clamped\n";
  }
  std::ofstream model_out(args.model_path, std::ios::binary);
  if (!model_out) {
    throw Error(errc::io_error,
                "cannot open '" + args.model_path + "' for writing");
  }
  save_triple(model_out, outcome.triple);
  if (!model_out) {
    throw Error(errc::io_error, "failed while writing '" + args.model_path + "'");
  }
  std::cout << "wrote " << args.model_path << "\n";
  write_file(args.output_path, write_records_jsonl(outcome.emitted));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distribution-free uncertainty calibration for regression"};
  app.require_subcommand(1);

  EvaluateArgs ev;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "split-conformal evaluation report over repeated splits");
  evaluate->add_option("-i,--input", ev.config.input, "record file (JSONL or CSV)")
      ->required();
  evaluate->add_option("--alpha", ev.config.alpha, "miscoverage level");
  evaluate->add_option("--kind", ev.config.kind, "score kind")
      ->transform(CLI::CheckedTransformer(kKindNames, CLI::ignore_case));
  evaluate->add_option("--runs", ev.config.runs, "number of splits");
  evaluate->add_option("--cal-size", ev.config.cal_size,
                       "calibration records per split");
  evaluate->add_option("--seed", ev.config.seed, "master seed");
  evaluate->add_flag("--no-stratify{false}", ev.config.stratify,
                     "disable group-stratified splitting");
  evaluate->add_option("--group-by", ev.config.group_by,
                       "per-group calibration on this field (only 'group')");
  evaluate->add_option("--bin-attr", ev.config.bin_attr,
                       "Mondrian binning attribute: quality, uncertainty or "
                       "an attribute name");
  evaluate->add_option("--min-group-size", ev.config.min_group_size,
                       "groups below this fall back to the pooled quantile");
  evaluate->add_option("--min-bin-size", ev.config.min_bin_size,
                       "minimum calibration records per bin");
  evaluate->add_option("--max-bins", ev.config.max_bins, "bin count cap");
  evaluate->add_option("--ece-levels", ev.config.ece_levels,
                       "number of interior confidence levels");
  evaluate->add_option("--eps-delta", ev.config.eps_delta,
                       "lower clamp for interval half-widths");
  evaluate->add_flag("--allow-unbounded", ev.config.allow_unbounded,
                     "keep infinite intervals instead of failing");
  evaluate->add_flag("--clamp-zero-uncertainty",
                     ev.config.clamp_zero_uncertainty,
                     "raise zero uncertainty to eps-delta instead of failing");
  evaluate->add_flag("--unseen-group-fallback",
                     ev.config.unseen_group_fallback,
                     "pooled quantile for groups unseen in calibration");
  evaluate->add_option("--report", ev.report_path, "report JSON path");
  evaluate->add_option("--intervals", ev.intervals_path,
                       "also write per-record conformal intervals CSV");
  evaluate->add_option("--plot-dir", ev.plot_dir,
                       "also write per_group.csv and per_bin.csv here");

  CalibratePredictArgs cp;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate-predict",
      "calibrate on one file, write intervals for another");
  calibrate->add_option("-c,--calibration", cp.calibration_path,
                        "calibration record file (y required)")
      ->required();
  calibrate->add_option("-p,--predict", cp.predict_path,
                        "prediction record file (y optional)")
      ->required();
  calibrate->add_option("--alpha", cp.config.alpha, "miscoverage level");
  calibrate->add_option("--kind", cp.config.kind, "score kind")
      ->transform(CLI::CheckedTransformer(kKindNames, CLI::ignore_case));
  calibrate->add_option("--group-by", cp.config.group_by,
                        "per-group calibration on this field (only 'group')");
  calibrate->add_option("--bin-attr", cp.config.bin_attr,
                        "Mondrian binning attribute");
  calibrate->add_option("--min-group-size", cp.config.min_group_size,
                        "groups below this fall back to the pooled quantile");
  calibrate->add_option("--min-bin-size", cp.config.min_bin_size,
                        "minimum calibration records per bin");
  calibrate->add_option("--max-bins", cp.config.max_bins, "bin count cap");
  calibrate->add_option("--eps-delta", cp.config.eps_delta,
                        "lower clamp for interval half-widths");
  calibrate->add_flag("--allow-unbounded", cp.config.allow_unbounded,
                      "keep infinite intervals instead of failing");
  calibrate->add_flag("--clamp-zero-uncertainty", cp.clamp_zero_uncertainty,
                      "raise zero uncertainty to eps-delta instead of failing");
  calibrate->add_flag("--unseen-group-fallback",
                      cp.config.unseen_group_fallback,
                      "pooled quantile for groups unseen in calibration");
  calibrate->add_option("-o,--output", cp.output_path, "intervals CSV path");

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo coverage experiment on synthetic data");
  simulate->add_option("--n-cal", sim.config.n_cal,
                       "calibration records per trial");
  simulate->add_option("--n-test", sim.config.n_test,
                       "test records per trial");
  simulate->add_option("--trials", sim.config.trials, "number of trials");
  simulate->add_option("--alpha", sim.config.alpha, "miscoverage level");
  simulate->add_option("--seed", sim.config.seed, "master seed");
  simulate->add_option("--scheme", sim.config.scheme, "calibration scheme")
      ->transform(CLI::CheckedTransformer(kSchemeNames, CLI::ignore_case));
  simulate->add_option(
      "--group", sim.group_specs,
      "population segment name:count[:sigma_base[:sigma_slope[:bias[:"
      "misreport[:misreport_slope]]]]]; repeatable");
  simulate->add_option("--min-group-size", sim.config.min_group_size,
                       "grouped scheme: small groups pool");
  simulate->add_option("--min-bin-size", sim.config.min_bin_size,
                       "mondrian scheme: minimum records per bin");
  simulate->add_option("--max-bins", sim.config.max_bins, "bin count cap");
  simulate->add_option("--eps-delta", sim.config.eps_delta,
                       "lower clamp for interval half-widths");
  simulate->add_option("--report", sim.report_path, "report JSON path");
  simulate->add_option("--trials-csv", sim.trials_csv_path,
                       "also write per-trial coverages CSV");

  FitQuantileArgs fq;
  CLI::App* fit = app.add_subcommand(
      "fit-quantile",
      "fit a lower/median/upper quantile triple and emit heuristic records");
  fit->add_option("-t,--train", fq.train_path,
                  "training CSV (y target, numeric features)")
      ->required();
  fit->add_option("--apply", fq.apply_path,
                  "emit records for this CSV instead of the training table");
  fit->add_option("--tau", fq.config.tau,
                  "total tail mass; fits tau/2, 0.5 and 1 - tau/2");
  fit->add_flag("--symmetric", fq.config.symmetric,
                "emit a single symmetric delta");
  fit->add_option("--lr", fq.config.hyper.learning_rate,
                  "base learning rate");
  fit->add_option("--epochs", fq.config.hyper.epochs, "training epochs");
  fit->add_option("--batch-size", fq.config.hyper.batch_size,
                  "minibatch size");
  fit->add_option("--seed", fq.config.hyper.seed, "shuffle seed");
  fit->add_option("--eps-delta", fq.config.eps_delta,
                  "lower clamp for emitted deltas");
  fit->add_option("--model-out", fq.model_path, "model file path");
  fit->add_option("-o,--output", fq.output_path, "emitted records JSONL path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*evaluate) return cmd_evaluate(ev);
    if (*calibrate) return cmd_calibrate_predict(cp);
    if (*simulate) return cmd_simulate(sim);
    if (*fit) return cmd_fit_quantile(fq);
  } catch (const confforge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
