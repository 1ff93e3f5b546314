#include "confforge/conformal.hpp"

#include <algorithm>
#include <limits>

#include "confforge/error.hpp"
#include "confforge/kernels.hpp"

namespace confforge {

double conformal_quantile(std::span<const double> scores, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(errc::invalid_alpha, "alpha must be in (0, 1)");
  }
  const std::size_t n = scores.size();
  if (n == 0) {
    throw Error(errc::empty_calibration, "no calibration scores");
  }
  for (double s : scores) {
    if (!std::isfinite(s) || s < 0.0) {
      throw Error(errc::non_finite,
                  "calibration scores must be finite and >= 0");
    }
  }
  const double rank =
      std::ceil(static_cast<double>(n + 1) * (1.0 - alpha));
  if (rank > static_cast<double>(n)) {
    return std::numeric_limits<double>::infinity();
  }
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted[static_cast<std::size_t>(rank) - 1];
}

PredictionInterval interval_symmetric(double y_hat, double delta,
                                      double q_hat) {
  return interval_asymmetric(y_hat, delta, delta, q_hat);
}

PredictionInterval interval_asymmetric(double y_hat, double delta_lo,
                                       double delta_hi, double q_hat) {
  if (!(delta_lo > 0.0) || !(delta_hi > 0.0)) {
    throw Error(errc::non_positive_delta, "deltas must be > 0");
  }
  if (std::isnan(q_hat) || q_hat < 0.0) {
    throw Error(errc::invalid_argument, "q_hat must be >= 0");
  }
  if (std::isinf(q_hat)) {
    return {-std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }
  return {y_hat - q_hat * delta_lo, y_hat + q_hat * delta_hi};
}

ConformalCalibrator fit_split(std::span<const RegressionRecord> calibration,
                              double alpha, ScoreKind kind,
                              double eps_delta) {
  if (calibration.empty()) {
    throw Error(errc::empty_calibration, "calibration set is empty");
  }
  const std::vector<double> scores =
      kernels::record_scores(calibration, alpha, kind, eps_delta);
  ConformalCalibrator cal;
  cal.alpha = alpha;
  cal.kind = kind;
  cal.q_hat = conformal_quantile(scores, alpha);
  cal.n_cal = static_cast<int>(calibration.size());
  cal.eps_delta = eps_delta;
  return cal;
}

PredictionInterval predict(const ConformalCalibrator& calibrator,
                           const RegressionRecord& record) {
  const Heuristic h = heuristics_of(record, calibrator.alpha, calibrator.kind,
                                    calibrator.eps_delta);
  return interval_asymmetric(h.y_hat, h.delta_lo, h.delta_hi,
                             calibrator.q_hat);
}

}  // namespace confforge
