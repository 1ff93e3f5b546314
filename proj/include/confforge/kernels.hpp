// Batch kernels over record arrays. Each kernel has an OpenMP variant
// (the default entry point) and a plain-loop `_serial` twin used as the
// reference in tests and benchmarks. Both variants are bitwise
// identical for any thread count: parallel loops write independent
// slots and floating-point reductions run serially in index order;
// integer count reductions are order-exact by associativity.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "confforge/conformal.hpp"
#include "confforge/scores.hpp"

namespace confforge::kernels {

// Non-conformity score per record; every record must carry y_true.
// threads = 0 picks effective_threads().
std::vector<double> record_scores(std::span<const RegressionRecord> records,
                                  double alpha, ScoreKind kind,
                                  double eps_delta, int threads = 0);
std::vector<double> record_scores_serial(
    std::span<const RegressionRecord> records, double alpha, ScoreKind kind,
    double eps_delta);

// Prediction interval per record at a per-record quantile.
std::vector<PredictionInterval> intervals_at(
    std::span<const RegressionRecord> records, std::span<const double> q_hats,
    double alpha, ScoreKind kind, double eps_delta, int threads = 0);
std::vector<PredictionInterval> intervals_at_serial(
    std::span<const RegressionRecord> records, std::span<const double> q_hats,
    double alpha, ScoreKind kind, double eps_delta);

// Number of intervals containing their ground truth.
std::int64_t covered_count(std::span<const PredictionInterval> intervals,
                           std::span<const double> ys, int threads = 0);
std::int64_t covered_count_serial(std::span<const PredictionInterval> intervals,
                                  std::span<const double> ys);

// For each record i with absolute residual r_i and scale s_i, the
// smallest level index b with r_i <= thresholds[b] * s_i (or M when
// none). Thresholds must be non-decreasing and non-negative.
std::vector<int> first_hit_level(std::span<const double> abs_residuals,
                                 std::span<const double> scales,
                                 std::span<const double> thresholds,
                                 int threads = 0);
std::vector<int> first_hit_level_serial(std::span<const double> abs_residuals,
                                        std::span<const double> scales,
                                        std::span<const double> thresholds);

// Mean |empirical hit rate - level| over levels, from first-hit indices.
double ece_from_first_hits(std::span<const int> first_hits,
                           std::span<const double> levels);

}  // namespace confforge::kernels
