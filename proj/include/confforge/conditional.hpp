// Conditional calibration: per-group conformal quantiles and Mondrian
// equal-frequency binning along a continuous attribute.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "confforge/conformal.hpp"

namespace confforge {

struct GroupedCalibrator {
  double alpha;
  ScoreKind kind;
  double eps_delta;
  std::map<std::string, double> quantiles;  // group -> q_hat
  std::map<std::string, int> counts;        // calibration records per group
  double pooled_q_hat;                      // over the whole calibration set
  // Groups below min_group_size; their quantiles entry holds the pooled
  // value.
  std::vector<std::string> fallback_groups;
  // When true, a group unseen during calibration predicts with the
  // pooled quantile instead of raising UnknownGroup.
  bool unseen_group_fallback;
  int n_cal;
};

// Fits one conformal quantile per group label. Groups with fewer than
// min_group_size calibration records fall back to the pooled quantile.
GroupedCalibrator fit_grouped(std::span<const RegressionRecord> calibration,
                              double alpha, ScoreKind kind,
                              int min_group_size,
                              bool unseen_group_fallback = false,
                              double eps_delta = 1e-8);

PredictionInterval predict_grouped(const GroupedCalibrator& calibrator,
                                   const RegressionRecord& record);

// What a Mondrian partition bins on.
struct BinAttribute {
  enum class Source {
    ground_truth_quality,    // y_true; test rows match on nearest bin mean
    predicted_uncertainty,   // heuristic interval half-width
    named,                   // a numeric attribute by name
  };
  Source source = Source::predicted_uncertainty;
  std::string name;  // set for Source::named

  static BinAttribute quality() { return {Source::ground_truth_quality, ""}; }
  static BinAttribute uncertainty() {
    return {Source::predicted_uncertainty, ""};
  }
  static BinAttribute attr(std::string n) {
    return {Source::named, std::move(n)};
  }
};

struct BinPartition {
  double alpha;
  ScoreKind kind;
  double eps_delta;
  BinAttribute attribute;
  std::vector<double> boundaries;     // size B-1, strictly increasing
  std::vector<double> bin_means;      // mean attribute value per bin
  std::vector<double> bin_quantiles;  // conformal q_hat per bin
  std::vector<int> bin_counts;
  int n_cal;
  std::vector<std::string> warnings;

  int bins() const { return static_cast<int>(bin_counts.size()); }
};

// Attribute value of one record under the partition's source.
double bin_attribute_value(const BinAttribute& attribute,
                           const RegressionRecord& record, double alpha,
                           ScoreKind kind, double eps_delta);

// Sorts the calibration set by attribute value and cuts it into
// B = floor(n / min_bin_size) bins (capped at max_bins). The first
// B - 1 bins hold the base count and the last bin absorbs the
// remainder. Boundaries are midpoints between adjacent cross-bin
// values. min_bin_size must be large enough for a finite quantile at
// alpha; a single-bin partition is produced with a warning.
BinPartition partition_bins(std::span<const RegressionRecord> calibration,
                            const BinAttribute& attribute, int min_bin_size,
                            double alpha, ScoreKind kind, int max_bins = 20,
                            double eps_delta = 1e-8);

// Bin whose mean is nearest to the value; ties take the lower index.
// Only meaningful for the ground-truth-quality source, where test rows
// carry no attribute value of their own and match on y_hat instead.
int assign_bin_by_mean(const BinPartition& partition, double value);

// Bin containing the value: bins are right-open [lo, hi) except the
// last, and values outside the outer boundaries clamp to the end bins.
int assign_bin_by_value(const BinPartition& partition, double value);

// Bin for a test record per the partition's attribute source.
int assign_bin(const BinPartition& partition, const RegressionRecord& record);

PredictionInterval predict_binned(const BinPartition& partition,
                                  const RegressionRecord& record);

}  // namespace confforge
