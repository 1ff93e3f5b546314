#include "confforge/kernels.hpp"

#include <cmath>
#include <limits>

#include "confforge/error.hpp"
#include "confforge/parallel.hpp"

namespace confforge::kernels {

namespace {

int resolve_threads(int threads) {
  return threads > 0 ? threads : effective_threads();
}

// The parallel loops below must not throw, so every condition that
// heuristics_of or the scoring functions could reject is checked
// up front in a serial pass.
void prevalidate(std::span<const RegressionRecord> records, double alpha,
                 ScoreKind kind, double eps_delta, bool need_y) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(errc::invalid_alpha, "alpha must be in (0, 1)");
  }
  if (!(eps_delta > 0.0)) {
    throw Error(errc::invalid_config, "eps_delta must be > 0");
  }
  for (const auto& rec : records) {
    if (need_y && !rec.has_y()) {
      throw Error(errc::missing_ground_truth,
                  "record '" + rec.id + "' has no y_true");
    }
    if (const auto* m = std::get_if<SamplesEstimate>(&rec.uncertainty)) {
      if (m->values.size() < 2) {
        throw Error(errc::empty_samples,
                    "record '" + rec.id + "' needs at least 2 samples");
      }
    } else if (std::holds_alternative<AsymmetricEstimate>(rec.uncertainty) &&
               kind == ScoreKind::symmetric) {
      throw Error(errc::kind_mismatch,
                  "record '" + rec.id +
                      "' carries an asymmetric estimate but the symmetric "
                      "score kind was requested");
    }
  }
}

double score_one(const RegressionRecord& rec, double alpha, ScoreKind kind,
                 double eps_delta) {
  const Heuristic h = heuristics_of(rec, alpha, kind, eps_delta);
  const double y = *rec.y_true;
  if (kind == ScoreKind::symmetric) {
    return std::fabs(y - h.y_hat) / h.delta();
  }
  if (y >= h.y_hat) {
    return (y - h.y_hat) / h.delta_hi;
  }
  return (h.y_hat - y) / h.delta_lo;
}

PredictionInterval interval_one(const RegressionRecord& rec, double q_hat,
                                double alpha, ScoreKind kind,
                                double eps_delta) {
  const Heuristic h = heuristics_of(rec, alpha, kind, eps_delta);
  if (std::isinf(q_hat)) {
    return {-std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }
  return {h.y_hat - q_hat * h.delta_lo, h.y_hat + q_hat * h.delta_hi};
}

}  // namespace

std::vector<double> record_scores(std::span<const RegressionRecord> records,
                                  double alpha, ScoreKind kind,
                                  double eps_delta, int threads) {
  prevalidate(records, alpha, kind, eps_delta, /*need_y=*/true);
  const int nt = resolve_threads(threads);
  const std::int64_t n = static_cast<std::int64_t>(records.size());
  std::vector<double> out(records.size());
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        score_one(records[static_cast<std::size_t>(i)], alpha, kind,
                  eps_delta);
  }
  return out;
}

std::vector<double> record_scores_serial(
    std::span<const RegressionRecord> records, double alpha, ScoreKind kind,
    double eps_delta) {
  prevalidate(records, alpha, kind, eps_delta, /*need_y=*/true);
  std::vector<double> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    out[i] = score_one(records[i], alpha, kind, eps_delta);
  }
  return out;
}

std::vector<PredictionInterval> intervals_at(
    std::span<const RegressionRecord> records, std::span<const double> q_hats,
    double alpha, ScoreKind kind, double eps_delta, int threads) {
  prevalidate(records, alpha, kind, eps_delta, /*need_y=*/false);
  if (q_hats.size() != records.size() && q_hats.size() != 1) {
    throw Error(errc::length_mismatch,
                "need one q_hat per record or a single shared q_hat");
  }
  for (double q : q_hats) {
    if (std::isnan(q) || q < 0.0) {
      throw Error(errc::invalid_argument, "q_hat must be >= 0");
    }
  }
  const bool shared = q_hats.size() == 1;
  const int nt = resolve_threads(threads);
  const std::int64_t n = static_cast<std::int64_t>(records.size());
  std::vector<PredictionInterval> out(records.size());
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    out[idx] = interval_one(records[idx], shared ? q_hats[0] : q_hats[idx],
                            alpha, kind, eps_delta);
  }
  return out;
}

std::vector<PredictionInterval> intervals_at_serial(
    std::span<const RegressionRecord> records, std::span<const double> q_hats,
    double alpha, ScoreKind kind, double eps_delta) {
  prevalidate(records, alpha, kind, eps_delta, /*need_y=*/false);
  if (q_hats.size() != records.size() && q_hats.size() != 1) {
    throw Error(errc::length_mismatch,
                "need one q_hat per record or a single shared q_hat");
  }
  for (double q : q_hats) {
    if (std::isnan(q) || q < 0.0) {
      throw Error(errc::invalid_argument, "q_hat must be >= 0");
    }
  }
  const bool shared = q_hats.size() == 1;
  std::vector<PredictionInterval> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    out[i] = interval_one(records[i], shared ? q_hats[0] : q_hats[i], alpha,
                          kind, eps_delta);
  }
  return out;
}

std::int64_t covered_count(std::span<const PredictionInterval> intervals,
                           std::span<const double> ys, int threads) {
  if (intervals.size() != ys.size()) {
    throw Error(errc::length_mismatch,
                "intervals and ground truth differ in length");
  }
  const int nt = resolve_threads(threads);
  const std::int64_t n = static_cast<std::int64_t>(intervals.size());
  std::int64_t covered = 0;
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1) \
    reduction(+ : covered)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    covered += intervals[idx].covers(ys[idx]) ? 1 : 0;
  }
  return covered;
}

std::int64_t covered_count_serial(std::span<const PredictionInterval> intervals,
                                  std::span<const double> ys) {
  if (intervals.size() != ys.size()) {
    throw Error(errc::length_mismatch,
                "intervals and ground truth differ in length");
  }
  std::int64_t covered = 0;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    covered += intervals[i].covers(ys[i]) ? 1 : 0;
  }
  return covered;
}

namespace {

// Smallest b with r <= thresholds[b] * s. The products are
// non-decreasing in b, so the predicate flips at most once and a
// binary search finds the same index a linear scan would.
int first_hit_one(double r, double s, std::span<const double> thresholds) {
  int lo = 0;
  int hi = static_cast<int>(thresholds.size());
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (r <= thresholds[static_cast<std::size_t>(mid)] * s) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

void check_hit_inputs(std::span<const double> abs_residuals,
                      std::span<const double> scales,
                      std::span<const double> thresholds) {
  if (abs_residuals.size() != scales.size()) {
    throw Error(errc::length_mismatch,
                "residuals and scales differ in length");
  }
  for (std::size_t b = 0; b < thresholds.size(); ++b) {
    if (!(thresholds[b] >= 0.0) ||
        (b > 0 && thresholds[b] < thresholds[b - 1])) {
      throw Error(errc::invalid_argument,
                  "thresholds must be non-negative and non-decreasing");
    }
  }
}

}  // namespace

std::vector<int> first_hit_level(std::span<const double> abs_residuals,
                                 std::span<const double> scales,
                                 std::span<const double> thresholds,
                                 int threads) {
  check_hit_inputs(abs_residuals, scales, thresholds);
  const int nt = resolve_threads(threads);
  const std::int64_t n = static_cast<std::int64_t>(abs_residuals.size());
  std::vector<int> out(abs_residuals.size());
#pragma omp parallel for num_threads(nt) schedule(static) if (nt > 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    out[idx] = first_hit_one(abs_residuals[idx], scales[idx], thresholds);
  }
  return out;
}

std::vector<int> first_hit_level_serial(std::span<const double> abs_residuals,
                                        std::span<const double> scales,
                                        std::span<const double> thresholds) {
  check_hit_inputs(abs_residuals, scales, thresholds);
  std::vector<int> out(abs_residuals.size());
  for (std::size_t i = 0; i < abs_residuals.size(); ++i) {
    out[i] = first_hit_one(abs_residuals[i], scales[i], thresholds);
  }
  return out;
}

double ece_from_first_hits(std::span<const int> first_hits,
                           std::span<const double> levels) {
  const std::size_t m = levels.size();
  if (m == 0) {
    throw Error(errc::invalid_config, "need at least one confidence level");
  }
  if (first_hits.empty()) {
    throw Error(errc::empty_input, "no records for calibration error");
  }
  std::vector<std::int64_t> hist(m + 1, 0);
  for (int fh : first_hits) {
    hist[static_cast<std::size_t>(fh)] += 1;
  }
  const double n = static_cast<double>(first_hits.size());
  double total = 0.0;
  std::int64_t cum = 0;
  for (std::size_t b = 0; b < m; ++b) {
    cum += hist[b];
    const double acc = static_cast<double>(cum) / n;
    total += std::fabs(acc - levels[b]);
  }
  return total / static_cast<double>(m);
}

}  // namespace confforge::kernels
