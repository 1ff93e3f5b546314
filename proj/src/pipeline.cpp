#include "confforge/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "confforge/error.hpp"
#include "confforge/fmt.hpp"
#include "confforge/kernels.hpp"
#include "confforge/metrics.hpp"
#include "confforge/probit.hpp"
#include "confforge/rng.hpp"
#include "confforge/split.hpp"

namespace confforge {

namespace {

std::vector<RegressionRecord> select(const std::vector<RegressionRecord>& all,
                                     const std::vector<std::size_t>& indices) {
  std::vector<RegressionRecord> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(all[i]);
  return out;
}

void require_ground_truth(std::span<const RegressionRecord> records,
                          const char* role) {
  for (const auto& rec : records) {
    if (!rec.has_y()) {
      throw Error(errc::missing_ground_truth, std::string(role) + " record '" +
                                                  rec.id + "' has no y value");
    }
  }
}

bool sigma_representable(std::span<const RegressionRecord> records) {
  for (const auto& rec : records) {
    if (std::holds_alternative<AsymmetricEstimate>(rec.uncertainty)) {
      return false;
    }
  }
  return true;
}

std::vector<double> ys_of(std::span<const RegressionRecord> records) {
  std::vector<double> ys;
  ys.reserve(records.size());
  for (const auto& rec : records) ys.push_back(*rec.y_true);
  return ys;
}

std::string kind_name(ScoreKind kind) {
  return kind == ScoreKind::symmetric ? "symmetric" : "asymmetric";
}

void check_common(double alpha, double eps_delta) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(errc::invalid_alpha, "alpha must lie in (0, 1), got " +
                                         format_double(alpha));
  }
  if (!(eps_delta > 0.0) || !std::isfinite(eps_delta)) {
    throw Error(errc::invalid_config, "eps-delta must be a positive number");
  }
}

void check_group_by(const std::optional<std::string>& group_by) {
  if (group_by && *group_by != "group") {
    throw Error(errc::invalid_config,
                "unsupported group-by field '" + *group_by +
                    "'; records carry a single group label");
  }
}

// Per-group conformal quantile for one test record, or the pooled
// fallback; throws UnknownGroup for a label absent from calibration
// when the fallback is off.
double grouped_q(const GroupedCalibrator& calibrator, const std::string& group) {
  auto it = calibrator.quantiles.find(group);
  if (it != calibrator.quantiles.end()) return it->second;
  if (calibrator.unseen_group_fallback) return calibrator.pooled_q_hat;
  throw Error(errc::unknown_group,
              "group '" + group + "' has no calibration records; rerun with "
                                  "--unseen-group-fallback to use the pooled "
                                  "quantile");
}

void refuse_unbounded(double q_hat, bool allow_unbounded,
                      const std::string& where) {
  if (std::isinf(q_hat) && !allow_unbounded) {
    throw Error(errc::unbounded_interval,
                where + ": conformal quantile is unbounded (calibration set "
                        "too small for alpha); rerun with --allow-unbounded "
                        "to keep infinite intervals");
  }
}

struct MeanAcc {
  double sum = 0.0;
  int n = 0;

  void add(double v) {
    sum += v;
    n += 1;
  }
  void add(const std::optional<double>& v) {
    if (v) add(*v);
  }
  std::optional<double> mean() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
  double mean_or_zero() const { return mean().value_or(0.0); }
};

}  // namespace

BinAttribute parse_bin_attr(const std::string& text) {
  if (text == "quality") return BinAttribute::quality();
  if (text == "uncertainty") return BinAttribute::uncertainty();
  if (text.empty()) {
    throw Error(errc::invalid_config, "bin attribute must not be empty");
  }
  return BinAttribute::attr(text);
}

EvaluateOutcome run_evaluate(const EvaluateConfig& config,
                             const std::vector<RegressionRecord>& records) {
  check_common(config.alpha, config.eps_delta);
  check_group_by(config.group_by);
  if (config.runs < 1) {
    throw Error(errc::invalid_config, "runs must be at least 1");
  }
  if (config.ece_levels < 1) {
    throw Error(errc::invalid_config, "ece-levels must be at least 1");
  }
  if (records.empty()) {
    throw Error(errc::empty_input, "no records in " + config.input);
  }
  require_ground_truth(records, "evaluate");

  std::optional<BinAttribute> bin_attr;
  if (config.bin_attr) bin_attr = parse_bin_attr(*config.bin_attr);

  const bool sigma_form = sigma_representable(records);
  const bool want_ece = config.kind == ScoreKind::symmetric && sigma_form;
  const std::vector<double> levels =
      default_confidence_levels(config.ece_levels);
  const std::vector<double> thresholds =
      want_ece ? ece_thresholds(levels) : std::vector<double>{};
  const double p_alpha = probit(1.0 - config.alpha / 2.0);

  EvaluateOutcome out;
  out.report.config = {config.input,
                       config.alpha,
                       kind_name(config.kind),
                       config.runs,
                       config.cal_size,
                       config.seed,
                       config.stratify,
                       config.group_by,
                       config.bin_attr,
                       config.min_group_size,
                       config.min_bin_size,
                       config.max_bins,
                       config.ece_levels,
                       config.eps_delta,
                       config.allow_unbounded,
                       config.clamp_zero_uncertainty,
                       config.unseen_group_fallback};
  if (!want_ece) {
    out.report.warnings.push_back(
        sigma_form ? "ece and affine calibration skipped: gaussian ece "
                     "needs the symmetric score kind"
                   : "ece and affine calibration skipped: records carry "
                     "asymmetric uncertainty with no sigma form");
  }

  const std::vector<SplitPlan> plans = split_harness(
      records, config.runs, config.cal_size, config.seed, config.stratify);

  MeanAcc m_q, m_cov_orig, m_cov_cal, m_cov_conf, m_sh_orig, m_sh_cal,
      m_sh_conf, m_ece_orig, m_ece_cal, m_a, m_b;
  struct GroupAcc {
    MeanAcc pooled, grouped;
    double n_test_sum = 0.0;
  };
  struct BinAcc {
    MeanAcc pooled, mondrian;
    double n_test_sum = 0.0;
  };
  std::map<std::string, GroupAcc> group_accs;
  std::map<int, BinAcc> bin_accs;

  for (const SplitPlan& plan : plans) {
    const std::vector<RegressionRecord> cal = select(records, plan.calibration);
    const std::vector<RegressionRecord> test = select(records, plan.test);
    const std::vector<double> test_ys = ys_of(test);

    RunEval run;
    run.run_index = plan.run_index;
    run.seed = plan.seed;
    run.n_cal = static_cast<int>(cal.size());
    run.n_test = static_cast<int>(test.size());
    const std::string tag = "run " + std::to_string(plan.run_index);
    if (run.n_test < 30) {
      run.warnings.push_back(tag + ": small test set (" +
                             std::to_string(run.n_test) +
                             " records); metrics are high-variance");
    }

    const std::vector<double> cal_scores = kernels::record_scores(
        cal, config.alpha, config.kind, config.eps_delta);
    run.q_hat = conformal_quantile(cal_scores, config.alpha);
    refuse_unbounded(run.q_hat, config.allow_unbounded, tag);
    if (std::isinf(run.q_hat)) {
      run.warnings.push_back(tag + ": conformal quantile is unbounded");
    }

    const std::vector<double> one{1.0};
    const std::vector<double> q_pool{run.q_hat};
    const std::vector<PredictionInterval> original = kernels::intervals_at(
        test, one, config.alpha, config.kind, config.eps_delta);
    const std::vector<PredictionInterval> conformal = kernels::intervals_at(
        test, q_pool, config.alpha, config.kind, config.eps_delta);
    run.coverage_original = coverage(original, test_ys);
    run.coverage_conformal = coverage(conformal, test_ys);
    run.sharpness_original = sharpness(original);
    run.sharpness_conformal = sharpness(conformal);

    if (want_ece) {
      run.ece_original = ece(test, levels);
      const AffineFit fit = affine_calibrate(cal, levels);
      run.affine_a = fit.a;
      run.affine_b = fit.b;
      const EceInputs tin = ece_inputs(test);
      std::vector<double> adjusted(test.size());
      std::vector<PredictionInterval> calibrated(test.size());
      for (std::size_t i = 0; i < test.size(); ++i) {
        adjusted[i] = fit.a * tin.sigmas[i] + fit.b;
        calibrated[i] = {test[i].y_hat - p_alpha * adjusted[i],
                         test[i].y_hat + p_alpha * adjusted[i]};
      }
      run.coverage_calibrated = coverage(calibrated, test_ys);
      run.sharpness_calibrated = sharpness(calibrated);
      const std::vector<int> hits =
          kernels::first_hit_level(tin.abs_residuals, adjusted, thresholds);
      run.ece_calibrated = kernels::ece_from_first_hits(hits, levels);
    }

    if (config.group_by) {
      const GroupedCalibrator gcal = fit_grouped(
          cal, config.alpha, config.kind, config.min_group_size,
          config.unseen_group_fallback, config.eps_delta);
      std::vector<std::string> test_groups(test.size());
      std::vector<double> gq(test.size());
      for (std::size_t i = 0; i < test.size(); ++i) {
        test_groups[i] = test[i].group;
        gq[i] = grouped_q(gcal, test[i].group);
        refuse_unbounded(gq[i], config.allow_unbounded,
                         tag + ", group '" + test[i].group + "'");
      }
      const std::vector<PredictionInterval> grouped = kernels::intervals_at(
          test, gq, config.alpha, config.kind, config.eps_delta);
      const auto cov_pooled =
          conditional_coverage<std::string>(test_groups, conformal, test_ys);
      const auto cov_grouped =
          conditional_coverage<std::string>(test_groups, grouped, test_ys);

      std::set<std::string> labels;
      for (const auto& [g, n] : gcal.counts) labels.insert(g);
      for (const auto& [g, c] : cov_pooled) labels.insert(g);
      for (const std::string& g : labels) {
        GroupRow row;
        row.group = g;
        auto cit = gcal.counts.find(g);
        row.n_cal = cit == gcal.counts.end() ? 0 : cit->second;
        auto qit = gcal.quantiles.find(g);
        row.q_hat =
            qit == gcal.quantiles.end() ? gcal.pooled_q_hat : qit->second;
        row.fallback =
            qit == gcal.quantiles.end() ||
            std::find(gcal.fallback_groups.begin(), gcal.fallback_groups.end(),
                      g) != gcal.fallback_groups.end();
        auto pit = cov_pooled.find(g);
        row.n_test = pit == cov_pooled.end() ? 0 : pit->second.count;
        if (pit != cov_pooled.end()) row.coverage_pooled = pit->second.value;
        auto git = cov_grouped.find(g);
        if (git != cov_grouped.end()) row.coverage_grouped = git->second.value;
        auto& acc = group_accs[g];
        acc.pooled.add(row.coverage_pooled);
        acc.grouped.add(row.coverage_grouped);
        acc.n_test_sum += row.n_test;
        run.per_group.push_back(std::move(row));
      }
    }

    std::vector<int> test_bins;
    if (bin_attr) {
      const BinPartition part = partition_bins(
          cal, *bin_attr, config.min_bin_size, config.alpha, config.kind,
          config.max_bins, config.eps_delta);
      for (const std::string& w : part.warnings) {
        run.warnings.push_back(tag + ": " + w);
      }
      test_bins.resize(test.size());
      std::vector<double> bq(test.size());
      for (std::size_t i = 0; i < test.size(); ++i) {
        test_bins[i] = assign_bin(part, test[i]);
        bq[i] = part.bin_quantiles[test_bins[i]];
      }
      const std::vector<PredictionInterval> mondrian = kernels::intervals_at(
          test, bq, config.alpha, config.kind, config.eps_delta);
      const auto cov_pooled =
          conditional_coverage<int>(test_bins, conformal, test_ys);
      const auto cov_mondrian =
          conditional_coverage<int>(test_bins, mondrian, test_ys);
      for (int b = 0; b < part.bins(); ++b) {
        BinRow row;
        row.bin = b;
        if (b > 0) row.lo = part.boundaries[b - 1];
        if (b + 1 < part.bins()) row.hi = part.boundaries[b];
        row.mean_attr = part.bin_means[b];
        row.n_cal = part.bin_counts[b];
        row.q_hat = part.bin_quantiles[b];
        auto pit = cov_pooled.find(b);
        row.n_test = pit == cov_pooled.end() ? 0 : pit->second.count;
        if (pit != cov_pooled.end()) row.coverage_pooled = pit->second.value;
        auto mit = cov_mondrian.find(b);
        if (mit != cov_mondrian.end()) {
          row.coverage_mondrian = mit->second.value;
        }
        auto& acc = bin_accs[b];
        acc.pooled.add(row.coverage_pooled);
        acc.mondrian.add(row.coverage_mondrian);
        acc.n_test_sum += row.n_test;
        run.per_bin.push_back(row);
      }
    }

    for (std::size_t i = 0; i < test.size(); ++i) {
      IntervalRow row;
      row.run = plan.run_index;
      row.id = test[i].id;
      row.group = test[i].group;
      if (bin_attr) row.bin = test_bins[i];
      row.y = test[i].y_true;
      row.y_hat = test[i].y_hat;
      row.q_hat = run.q_hat;
      row.lo = conformal[i].lo;
      row.hi = conformal[i].hi;
      row.covered = conformal[i].covers(test_ys[i]);
      out.intervals.push_back(std::move(row));
    }

    m_q.add(run.q_hat);
    m_cov_orig.add(run.coverage_original);
    m_cov_cal.add(run.coverage_calibrated);
    m_cov_conf.add(run.coverage_conformal);
    m_sh_orig.add(run.sharpness_original);
    m_sh_cal.add(run.sharpness_calibrated);
    m_sh_conf.add(run.sharpness_conformal);
    m_ece_orig.add(run.ece_original);
    m_ece_cal.add(run.ece_calibrated);
    m_a.add(run.affine_a);
    m_b.add(run.affine_b);
    out.report.runs.push_back(std::move(run));
  }

  EvalMeans& mean = out.report.mean;
  mean.q_hat = m_q.mean_or_zero();
  mean.coverage_original = m_cov_orig.mean_or_zero();
  mean.coverage_calibrated = m_cov_cal.mean();
  mean.coverage_conformal = m_cov_conf.mean_or_zero();
  mean.sharpness_original = m_sh_orig.mean_or_zero();
  mean.sharpness_calibrated = m_sh_cal.mean();
  mean.sharpness_conformal = m_sh_conf.mean_or_zero();
  mean.ece_original = m_ece_orig.mean();
  mean.ece_calibrated = m_ece_cal.mean();
  mean.affine_a = m_a.mean();
  mean.affine_b = m_b.mean();
  const double runs = static_cast<double>(config.runs);
  for (const auto& [g, acc] : group_accs) {
    mean.per_group.push_back(
        {g, acc.pooled.mean(), acc.grouped.mean(), acc.n_test_sum / runs});
  }
  for (const auto& [b, acc] : bin_accs) {
    mean.per_bin.push_back(
        {b, acc.pooled.mean(), acc.mondrian.mean(), acc.n_test_sum / runs});
  }
  for (const RunEval& run : out.report.runs) {
    for (const std::string& w : run.warnings) {
      out.report.warnings.push_back(w);
    }
  }
  return out;
}

CalibratePredictOutcome run_calibrate_predict(
    const CalibratePredictConfig& config,
    const std::vector<RegressionRecord>& calibration,
    const std::vector<RegressionRecord>& prediction) {
  check_common(config.alpha, config.eps_delta);
  check_group_by(config.group_by);
  if (config.group_by && config.bin_attr) {
    throw Error(errc::invalid_config,
                "choose at most one of --group-by and --bin-attr");
  }
  if (calibration.empty()) {
    throw Error(errc::empty_calibration, "no calibration records");
  }
  if (prediction.empty()) {
    throw Error(errc::empty_input, "no prediction records");
  }
  require_ground_truth(calibration, "calibration");

  CalibratePredictOutcome out;
  out.rows.reserve(prediction.size());

  if (config.bin_attr) {
    const BinAttribute attr = parse_bin_attr(*config.bin_attr);
    const BinPartition part = partition_bins(
        calibration, attr, config.min_bin_size, config.alpha, config.kind,
        config.max_bins, config.eps_delta);
    out.warnings = part.warnings;
    for (const auto& rec : prediction) {
      const int b = assign_bin(part, rec);
      const double q = part.bin_quantiles[b];
      const Heuristic h =
          heuristics_of(rec, config.alpha, config.kind, config.eps_delta);
      const PredictionInterval iv =
          interval_asymmetric(rec.y_hat, h.delta_lo, h.delta_hi, q);
      out.rows.push_back({rec.id, rec.group, b, q, iv.lo, iv.hi});
    }
    return out;
  }

  if (config.group_by) {
    const GroupedCalibrator gcal = fit_grouped(
        calibration, config.alpha, config.kind, config.min_group_size,
        config.unseen_group_fallback, config.eps_delta);
    for (const auto& rec : prediction) {
      const double q = grouped_q(gcal, rec.group);
      refuse_unbounded(q, config.allow_unbounded,
                       "group '" + rec.group + "'");
      const Heuristic h =
          heuristics_of(rec, config.alpha, config.kind, config.eps_delta);
      const PredictionInterval iv =
          interval_asymmetric(rec.y_hat, h.delta_lo, h.delta_hi, q);
      out.rows.push_back({rec.id, rec.group, std::nullopt, q, iv.lo, iv.hi});
    }
    return out;
  }

  const ConformalCalibrator calr =
      fit_split(calibration, config.alpha, config.kind, config.eps_delta);
  refuse_unbounded(calr.q_hat, config.allow_unbounded, "calibration");
  for (const auto& rec : prediction) {
    const PredictionInterval iv = predict(calr, rec);
    out.rows.push_back(
        {rec.id, rec.group, std::nullopt, calr.q_hat, iv.lo, iv.hi});
  }
  return out;
}

std::string write_predictions_csv(const CalibratePredictOutcome& outcome) {
  std::string out = "id,group,bin,q_hat,lo,hi\n";
  for (const PredictedRow& row : outcome.rows) {
    out += row.id;
    out += ',';
    out += row.group;
    out += ',';
    if (row.bin) out += std::to_string(*row.bin);
    out += ',';
    out += csv_cell(row.q_hat);
    out += ',';
    out += csv_cell(row.lo);
    out += ',';
    out += csv_cell(row.hi);
    out += '\n';
  }
  return out;
}

FitQuantileOutcome run_fit_quantile(const FitQuantileConfig& config,
                                    const TrainingTable& train,
                                    const TrainingTable& apply) {
  if (!(config.tau > 0.0 && config.tau < 1.0)) {
    throw Error(errc::invalid_tau, "tau must lie in (0, 1), got " +
                                       format_double(config.tau));
  }
  if (!(config.eps_delta > 0.0) || !std::isfinite(config.eps_delta)) {
    throw Error(errc::invalid_config, "eps-delta must be a positive number");
  }
  if (apply.feature_names != train.feature_names) {
    throw Error(errc::dimension_mismatch,
                "apply table feature columns differ from the training table");
  }

  const Standardizer standardizer = Standardizer::fit(train.features);
  const std::vector<std::vector<double>> standardized =
      standardizer.transform(train.features);
  const double taus[3] = {config.tau / 2.0, 0.5, 1.0 - config.tau / 2.0};

  FitQuantileOutcome out{};
  QuantileModel models[3];
  for (int m = 0; m < 3; ++m) {
    FitHyper hyper = config.hyper;
    hyper.seed = mix_seed(config.hyper.seed, static_cast<std::uint64_t>(m));
    const FitResult fitted =
        fit_quantile(standardized, train.targets, taus[m], hyper);
    models[m] = standardizer.unfold(fitted.model);
    out.final_losses.push_back(fitted.loss_trace.back());
  }
  out.triple = {models[0], models[1], models[2]};

  out.emitted.reserve(apply.targets.size());
  for (std::size_t i = 0; i < apply.targets.size(); ++i) {
    const auto& x = apply.features[i];
    const double q_lo = out.triple.lo.predict(x);
    const double q_med = out.triple.med.predict(x);
    const double q_hi = out.triple.hi.predict(x);
    RegressionRecord rec;
    rec.id = apply.ids[i];
    rec.group = apply.groups[i];
    rec.y_true = apply.targets[i];
    if (config.symmetric) {
      const TripleSymHeuristic h =
          triple_sym_heuristic(q_lo, q_hi, config.eps_delta);
      rec.y_hat = h.y_hat;
      rec.uncertainty = AsymmetricEstimate{h.delta, h.delta};
      if (h.crossed) out.crossed_rows += 1;
    } else {
      const TripleHeuristic h =
          triple_heuristic(q_lo, q_med, q_hi, config.eps_delta);
      rec.y_hat = h.y_hat;
      rec.uncertainty = AsymmetricEstimate{h.delta_lo, h.delta_hi};
      if (h.crossed) out.crossed_rows += 1;
    }
    out.emitted.push_back(std::move(rec));
  }
  return out;
}

std::string write_records_jsonl(const std::vector<RegressionRecord>& records) {
  std::string out;
  for (const auto& rec : records) {
    out += "{\"id\": ";
    out += json_quote(rec.id);
    if (!rec.group.empty()) {
      out += ", \"group\": ";
      out += json_quote(rec.group);
    }
    if (rec.y_true) {
      out += ", \"y\": ";
      out += format_double(*rec.y_true);
    }
    out += ", \"y_hat\": ";
    out += format_double(rec.y_hat);
    if (const auto* s = std::get_if<SigmaEstimate>(&rec.uncertainty)) {
      out += ", \"sigma\": ";
      out += format_double(s->sigma);
    } else if (const auto* a =
                   std::get_if<AsymmetricEstimate>(&rec.uncertainty)) {
      if (a->delta_lo == a->delta_hi) {
        out += ", \"delta\": ";
        out += format_double(a->delta_lo);
      } else {
        out += ", \"delta_lo\": ";
        out += format_double(a->delta_lo);
        out += ", \"delta_hi\": ";
        out += format_double(a->delta_hi);
      }
    } else if (const auto* v =
                   std::get_if<SamplesEstimate>(&rec.uncertainty)) {
      out += ", \"samples\": [";
      for (std::size_t i = 0; i < v->values.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_double(v->values[i]);
      }
      out += "]";
    }
    if (!rec.attrs.empty()) {
      out += ", \"attrs\": {";
      bool first = true;
      for (const auto& [k, v] : rec.attrs) {
        if (!first) out += ", ";
        first = false;
        out += json_quote(k);
        out += ": ";
        out += format_double(v);
      }
      out += "}";
    }
    out += "}\n";
  }
  return out;
}

namespace {

const char* scheme_name(CalibrationScheme scheme) {
  switch (scheme) {
    case CalibrationScheme::pooled: return "pooled";
    case CalibrationScheme::grouped: return "grouped";
    case CalibrationScheme::mondrian: return "mondrian";
  }
  return "pooled";
}

}  // namespace

std::string write_simulate_report_json(const SimulateOutcome& outcome) {
  const SynthConfig& c = outcome.config;
  JValue groups = JValue::array();
  for (const GroupSpec& g : c.groups) {
    JValue spec = JValue::object();
    spec.set("name", g.name);
    spec.set("count", g.count);
    spec.set("sigma_base", g.sigma_base);
    spec.set("sigma_slope", g.sigma_slope);
    spec.set("bias", g.bias);
    spec.set("misreport", g.misreport);
    spec.set("misreport_slope", g.misreport_slope);
    groups.push(std::move(spec));
  }
  JValue config = JValue::object();
  config.set("n_cal", c.n_cal);
  config.set("n_test", c.n_test);
  config.set("trials", c.trials);
  config.set("alpha", c.alpha);
  config.set("seed", std::to_string(c.seed));
  config.set("scheme", scheme_name(c.scheme));
  config.set("min_group_size", c.min_group_size);
  config.set("min_bin_size", c.min_bin_size);
  config.set("max_bins", c.max_bins);
  config.set("eps_delta", c.eps_delta);
  config.set("groups", std::move(groups));

  const ExperimentResult& r = outcome.result;
  JValue per_group = JValue::object();
  for (const auto& [g, cov] : r.group_coverage) per_group.set(g, cov);
  JValue per_bin = JValue::object();
  for (const auto& [b, cov] : r.bin_coverage) {
    per_bin.set(std::to_string(b), cov);
  }
  JValue result = JValue::object();
  result.set("mean_coverage", r.mean_coverage);
  result.set("ci_halfwidth", r.ci_halfwidth);
  result.set("mean_q_hat", r.mean_q_hat);
  result.set("per_group", std::move(per_group));
  result.set("per_bin", std::move(per_bin));

  JValue root = JValue::object();
  root.set("format_version", "1");
  root.set("command", "simulate");
  root.set("config", std::move(config));
  root.set("result", std::move(result));
  return root.dump();
}

std::string write_trials_csv(const ExperimentResult& result) {
  std::string out = "trial,coverage,q_hat\n";
  for (std::size_t t = 0; t < result.trial_coverage.size(); ++t) {
    out += std::to_string(t);
    out += ',';
    out += csv_cell(result.trial_coverage[t]);
    out += ',';
    out += csv_cell(result.trial_q_hat[t]);
    out += '\n';
  }
  return out;
}

}  // namespace confforge
