#include "confforge/scores.hpp"

#include <cmath>

#include "confforge/error.hpp"
#include "confforge/probit.hpp"

namespace confforge {

Moments samples_to_moments(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw Error(errc::empty_samples, "need at least 2 samples for moments");
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(n - 1);
  return {mean, std::sqrt(var)};
}

double sigma_to_delta(double sigma, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(errc::invalid_alpha, "alpha must be in (0, 1)");
  }
  if (!(sigma > 0.0)) {
    throw Error(errc::non_positive_sigma, "sigma must be > 0");
  }
  return probit(1.0 - alpha / 2.0) * sigma;
}

double score_symmetric(double y, double y_hat, double delta) {
  if (!(delta > 0.0)) {
    throw Error(errc::non_positive_delta, "delta must be > 0");
  }
  return std::fabs(y - y_hat) / delta;
}

double score_asymmetric(double y, double y_hat, double delta_lo,
                        double delta_hi) {
  if (!(delta_lo > 0.0) || !(delta_hi > 0.0)) {
    throw Error(errc::non_positive_delta, "deltas must be > 0");
  }
  if (y >= y_hat) {
    return (y - y_hat) / delta_hi;
  }
  return (y_hat - y) / delta_lo;
}

Heuristic heuristics_of(const RegressionRecord& record, double alpha,
                        ScoreKind kind, double eps_delta) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(errc::invalid_alpha, "alpha must be in (0, 1)");
  }
  Heuristic h;
  h.kind = kind;
  h.y_hat = record.y_hat;
  h.clamped = false;

  double sigma = -1.0;
  if (const auto* s = std::get_if<SigmaEstimate>(&record.uncertainty)) {
    sigma = s->sigma;
  } else if (const auto* m =
                 std::get_if<SamplesEstimate>(&record.uncertainty)) {
    sigma = samples_to_moments(m->values).sigma;
  } else {
    const auto& a = std::get<AsymmetricEstimate>(record.uncertainty);
    if (kind == ScoreKind::symmetric) {
      throw Error(errc::kind_mismatch,
                  "record '" + record.id +
                      "' carries an asymmetric estimate but the symmetric "
                      "score kind was requested");
    }
    h.delta_lo = a.delta_lo;
    h.delta_hi = a.delta_hi;
    if (h.delta_lo < eps_delta) {
      h.delta_lo = eps_delta;
      h.clamped = true;
    }
    if (h.delta_hi < eps_delta) {
      h.delta_hi = eps_delta;
      h.clamped = true;
    }
    return h;
  }

  double delta = (sigma > 0.0) ? sigma_to_delta(sigma, alpha) : 0.0;
  if (delta < eps_delta) {
    delta = eps_delta;
    h.clamped = true;
  }
  h.delta_lo = delta;
  h.delta_hi = delta;
  return h;
}

double score_record(const RegressionRecord& record, double alpha,
                    ScoreKind kind, double eps_delta) {
  if (!record.has_y()) {
    throw Error(errc::missing_ground_truth,
                "record '" + record.id + "' has no y_true to score");
  }
  const Heuristic h = heuristics_of(record, alpha, kind, eps_delta);
  if (kind == ScoreKind::symmetric) {
    return score_symmetric(*record.y_true, h.y_hat, h.delta());
  }
  return score_asymmetric(*record.y_true, h.y_hat, h.delta_lo, h.delta_hi);
}

}  // namespace confforge
