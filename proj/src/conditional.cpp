#include "confforge/conditional.hpp"

#include <algorithm>
#include <cmath>

#include "confforge/error.hpp"
#include "confforge/kernels.hpp"

namespace confforge {

namespace {

// Smallest calibration count whose conformal quantile is finite at
// alpha, found by scanning the rank condition itself so the arithmetic
// matches conformal_quantile exactly.
int min_finite_count(double alpha) {
  for (int c = 1;; ++c) {
    const double rank = std::ceil(static_cast<double>(c + 1) * (1.0 - alpha));
    if (rank <= static_cast<double>(c)) return c;
  }
}

PredictionInterval interval_for(const RegressionRecord& record, double q_hat,
                                double alpha, ScoreKind kind,
                                double eps_delta) {
  const Heuristic h = heuristics_of(record, alpha, kind, eps_delta);
  return interval_asymmetric(h.y_hat, h.delta_lo, h.delta_hi, q_hat);
}

}  // namespace

GroupedCalibrator fit_grouped(std::span<const RegressionRecord> calibration,
                              double alpha, ScoreKind kind,
                              int min_group_size, bool unseen_group_fallback,
                              double eps_delta) {
  if (calibration.empty()) {
    throw Error(errc::empty_calibration, "calibration set is empty");
  }
  if (min_group_size < 1) {
    throw Error(errc::invalid_config, "min_group_size must be >= 1");
  }
  const std::vector<double> scores =
      kernels::record_scores(calibration, alpha, kind, eps_delta);

  std::map<std::string, std::vector<double>> by_group;
  for (std::size_t i = 0; i < calibration.size(); ++i) {
    by_group[calibration[i].group].push_back(scores[i]);
  }

  GroupedCalibrator cal;
  cal.alpha = alpha;
  cal.kind = kind;
  cal.eps_delta = eps_delta;
  cal.pooled_q_hat = conformal_quantile(scores, alpha);
  cal.unseen_group_fallback = unseen_group_fallback;
  cal.n_cal = static_cast<int>(calibration.size());
  for (const auto& [label, group_scores] : by_group) {
    cal.counts[label] = static_cast<int>(group_scores.size());
    if (group_scores.size() < static_cast<std::size_t>(min_group_size)) {
      cal.quantiles[label] = cal.pooled_q_hat;
      cal.fallback_groups.push_back(label);
    } else {
      cal.quantiles[label] = conformal_quantile(group_scores, alpha);
    }
  }
  return cal;
}

PredictionInterval predict_grouped(const GroupedCalibrator& calibrator,
                                   const RegressionRecord& record) {
  const auto it = calibrator.quantiles.find(record.group);
  double q_hat;
  if (it != calibrator.quantiles.end()) {
    q_hat = it->second;
  } else if (calibrator.unseen_group_fallback) {
    q_hat = calibrator.pooled_q_hat;
  } else {
    throw Error(errc::unknown_group,
                "group '" + record.group +
                    "' was not seen during calibration and pooled fallback "
                    "is off");
  }
  return interval_for(record, q_hat, calibrator.alpha, calibrator.kind,
                      calibrator.eps_delta);
}

double bin_attribute_value(const BinAttribute& attribute,
                           const RegressionRecord& record, double alpha,
                           ScoreKind kind, double eps_delta) {
  switch (attribute.source) {
    case BinAttribute::Source::ground_truth_quality:
      if (!record.has_y()) {
        throw Error(errc::missing_ground_truth,
                    "record '" + record.id + "' has no y_true to bin on");
      }
      return *record.y_true;
    case BinAttribute::Source::predicted_uncertainty:
      return heuristics_of(record, alpha, kind, eps_delta).half_width();
    case BinAttribute::Source::named: {
      const auto it = record.attrs.find(attribute.name);
      if (it == record.attrs.end()) {
        throw Error(errc::missing_attribute,
                    "record '" + record.id + "' has no attribute '" +
                        attribute.name + "'");
      }
      return it->second;
    }
  }
  throw Error(errc::invalid_argument, "unknown bin attribute source");
}

BinPartition partition_bins(std::span<const RegressionRecord> calibration,
                            const BinAttribute& attribute, int min_bin_size,
                            double alpha, ScoreKind kind, int max_bins,
                            double eps_delta) {
  if (calibration.empty()) {
    throw Error(errc::empty_calibration, "calibration set is empty");
  }
  if (max_bins < 1) {
    throw Error(errc::invalid_config, "max_bins must be >= 1");
  }
  const int need = min_finite_count(alpha);
  if (min_bin_size < need) {
    throw Error(errc::min_bin_too_small,
                "min_bin_size " + std::to_string(min_bin_size) +
                    " cannot give a finite quantile at alpha; need >= " +
                    std::to_string(need));
  }
  const int n = static_cast<int>(calibration.size());
  if (n < min_bin_size) {
    throw Error(errc::insufficient_data,
                "need at least min_bin_size = " +
                    std::to_string(min_bin_size) + " records, have " +
                    std::to_string(n));
  }

  const std::vector<double> scores =
      kernels::record_scores(calibration, alpha, kind, eps_delta);
  std::vector<double> values(calibration.size());
  for (std::size_t i = 0; i < calibration.size(); ++i) {
    values[i] = bin_attribute_value(attribute, calibration[i], alpha, kind,
                                    eps_delta);
    if (!std::isfinite(values[i])) {
      throw Error(errc::non_finite, "record '" + calibration[i].id +
                                        "' has a non-finite bin attribute");
    }
  }

  const int raw_bins = n / min_bin_size;
  const int b_count = std::min(raw_bins, max_bins);
  const int base = (raw_bins <= max_bins) ? min_bin_size : n / b_count;

  std::vector<std::size_t> order(calibration.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return values[a] < values[b];
                   });

  BinPartition part;
  part.alpha = alpha;
  part.kind = kind;
  part.eps_delta = eps_delta;
  part.attribute = attribute;
  part.n_cal = n;
  if (b_count == 1) {
    part.warnings.push_back(
        "only one bin; conditional coverage reduces to marginal coverage");
  }

  std::size_t start = 0;
  for (int b = 0; b < b_count; ++b) {
    const std::size_t count =
        (b + 1 < b_count) ? static_cast<std::size_t>(base)
                          : calibration.size() - start;
    const std::size_t end = start + count;
    double sum = 0.0;
    std::vector<double> bin_scores;
    bin_scores.reserve(count);
    for (std::size_t i = start; i < end; ++i) {
      sum += values[order[i]];
      bin_scores.push_back(scores[order[i]]);
    }
    part.bin_means.push_back(sum / static_cast<double>(count));
    part.bin_counts.push_back(static_cast<int>(count));
    part.bin_quantiles.push_back(conformal_quantile(bin_scores, alpha));
    if (b + 1 < b_count) {
      const double left = values[order[end - 1]];
      const double right = values[order[end]];
      part.boundaries.push_back(0.5 * (left + right));
    }
    start = end;
  }

  for (std::size_t i = 1; i < part.boundaries.size(); ++i) {
    if (!(part.boundaries[i] > part.boundaries[i - 1])) {
      throw Error(errc::degenerate_input,
                  "bin boundaries are not strictly increasing; the "
                  "attribute has too many tied values");
    }
  }
  return part;
}

int assign_bin_by_mean(const BinPartition& partition, double value) {
  if (partition.bin_means.empty()) {
    throw Error(errc::invalid_argument, "partition has no bins");
  }
  int best = 0;
  double best_dist = std::fabs(value - partition.bin_means[0]);
  for (std::size_t b = 1; b < partition.bin_means.size(); ++b) {
    const double dist = std::fabs(value - partition.bin_means[b]);
    if (dist < best_dist) {
      best = static_cast<int>(b);
      best_dist = dist;
    }
  }
  return best;
}

int assign_bin_by_value(const BinPartition& partition, double value) {
  if (partition.bin_counts.empty()) {
    throw Error(errc::invalid_argument, "partition has no bins");
  }
  const auto it = std::upper_bound(partition.boundaries.begin(),
                                   partition.boundaries.end(), value);
  return static_cast<int>(it - partition.boundaries.begin());
}

int assign_bin(const BinPartition& partition, const RegressionRecord& record) {
  switch (partition.attribute.source) {
    case BinAttribute::Source::ground_truth_quality:
      // Test rows have no usable ground truth; match on the point
      // prediction against the per-bin means.
      return assign_bin_by_mean(partition, record.y_hat);
    case BinAttribute::Source::predicted_uncertainty:
    case BinAttribute::Source::named:
      return assign_bin_by_value(
          partition,
          bin_attribute_value(partition.attribute, record, partition.alpha,
                              partition.kind, partition.eps_delta));
  }
  throw Error(errc::invalid_argument, "unknown bin attribute source");
}

PredictionInterval predict_binned(const BinPartition& partition,
                                  const RegressionRecord& record) {
  const int b = assign_bin(partition, record);
  return interval_for(record,
                      partition.bin_quantiles[static_cast<std::size_t>(b)],
                      partition.alpha, partition.kind, partition.eps_delta);
}

}  // namespace confforge
