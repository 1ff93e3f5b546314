// Evaluation metrics: coverage, sharpness, expected calibration error
// for regression, and the affine sigma recalibration search.
#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "confforge/conformal.hpp"

namespace confforge {

// Fraction of intervals containing their ground truth (micro average).
double coverage(std::span<const PredictionInterval> intervals,
                std::span<const double> ys);

struct KeyCoverage {
  double value;
  int count;
};

// Coverage within each key's subset; keys with no records are absent.
template <typename Key>
std::map<Key, KeyCoverage> conditional_coverage(
    const std::vector<Key>& keys,
    std::span<const PredictionInterval> intervals,
    std::span<const double> ys);

namespace detail {
void check_coverage_args(std::size_t n_keys, std::size_t n_intervals,
                         std::size_t n_ys);
}

template <typename Key>
std::map<Key, KeyCoverage> conditional_coverage(
    const std::vector<Key>& keys,
    std::span<const PredictionInterval> intervals,
    std::span<const double> ys) {
  detail::check_coverage_args(keys.size(), intervals.size(), ys.size());
  std::map<Key, std::pair<int, int>> hits;  // key -> (covered, total)
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto& [covered, total] = hits[keys[i]];
    covered += intervals[i].covers(ys[i]) ? 1 : 0;
    total += 1;
  }
  std::map<Key, KeyCoverage> out;
  for (const auto& [key, ct] : hits) {
    out[key] = {static_cast<double>(ct.first) / static_cast<double>(ct.second),
                ct.second};
  }
  return out;
}

// Mean interval width; +inf as soon as any interval is unbounded.
double sharpness(std::span<const PredictionInterval> intervals);

// Evenly spaced interior confidence levels b / (m + 1); m = 19 gives
// {0.05, 0.10, ..., 0.95}.
std::vector<double> default_confidence_levels(int m = 19);

// probit((1 + g) / 2) per level. Validates that the levels are
// strictly increasing inside (0, 1).
std::vector<double> ece_thresholds(std::span<const double> levels);

// Per-record absolute residual |y - y_hat| and sigma (Sigma directly,
// Samples via moments; asymmetric records are unsupported).
struct EceInputs {
  std::vector<double> abs_residuals;
  std::vector<double> sigmas;
};
EceInputs ece_inputs(std::span<const RegressionRecord> records);

// Mean over levels of |empirical hit rate - level|, where a record hits
// level g when |y - y_hat| <= probit((1 + g) / 2) * sigma.
double ece(std::span<const RegressionRecord> records,
           std::span<const double> levels);

struct AffineFit {
  double a;
  double b;
  double ece_before;  // identity transform
  double ece_after;   // at (a, b)
};

// Two-stage deterministic grid search for sigma' = a * sigma + b
// minimizing ECE: a log-spaced over [1e-2, 1e2] (41 points) and b
// linear over [0, 2 * median |y - y_hat|] (21 points), then a second
// pass at 10x resolution around the optimum. Ties break toward smaller
// ECE, then smaller a, then smaller b.
AffineFit affine_calibrate(std::span<const RegressionRecord> records,
                           std::span<const double> levels, int threads = 0);

// Serial reference twin of the grid search.
AffineFit affine_calibrate_serial(std::span<const RegressionRecord> records,
                                  std::span<const double> levels);

}  // namespace confforge
