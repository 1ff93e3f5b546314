// Split conformal calibration: finite-sample coverage from a held-out
// calibration set, for any heuristic uncertainty estimate.
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "confforge/scores.hpp"

namespace confforge {

struct PredictionInterval {
  double lo;
  double hi;

  bool unbounded() const { return std::isinf(lo) || std::isinf(hi); }
  bool covers(double y) const { return lo <= y && y <= hi; }
  double width() const { return hi - lo; }
};

struct ConformalCalibrator {
  double alpha;
  ScoreKind kind;
  double q_hat;  // +inf when the calibration set is too small for alpha
  int n_cal;
  double eps_delta;

  bool infinite() const { return std::isinf(q_hat); }
};

// The ceil((n+1)(1-alpha)) / n empirical quantile of the calibration
// scores; +inf when the rank exceeds n. Scores must be finite and
// non-negative.
double conformal_quantile(std::span<const double> scores, double alpha);

// [y_hat - q_hat * delta, y_hat + q_hat * delta].
PredictionInterval interval_symmetric(double y_hat, double delta,
                                      double q_hat);

// [y_hat - q_hat * delta_lo, y_hat + q_hat * delta_hi].
PredictionInterval interval_asymmetric(double y_hat, double delta_lo,
                                       double delta_hi, double q_hat);

// Scores every calibration record (all must carry y_true) and fixes the
// conformal quantile.
ConformalCalibrator fit_split(std::span<const RegressionRecord> calibration,
                              double alpha, ScoreKind kind,
                              double eps_delta = 1e-8);

PredictionInterval predict(const ConformalCalibrator& calibrator,
                           const RegressionRecord& record);

}  // namespace confforge
