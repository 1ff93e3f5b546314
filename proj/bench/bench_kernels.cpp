// Timing comparison of the parallel kernels against their serial
// reference twins. Prints one row per kernel with wall time in
// milliseconds and the speedup; each pair is also checked for bitwise
// agreement so a divergence never hides behind a fast run.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "confforge/kernels.hpp"
#include "confforge/metrics.hpp"
#include "confforge/parallel.hpp"
#include "confforge/record.hpp"
#include "confforge/rng.hpp"
#include "confforge/synth.hpp"

using namespace confforge;

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

void row(const char* name, double serial_ms, double parallel_ms,
         bool same) {
  std::printf("%-22s %10.1f ms %10.1f ms %8.2fx %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms,
              same ? "" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 2000000;
  const double alpha = 0.1;
  const double eps = 1e-8;

  Rng rng(42);
  std::vector<RegressionRecord> records;
  records.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double sigma = 0.5 + rng.next_unit();
    RegressionRecord rec;
    rec.id = "r" + std::to_string(i);
    rec.y_true = sigma * rng.next_normal();
    rec.y_hat = 0.0;
    rec.uncertainty = SigmaEstimate{sigma};
    records.push_back(std::move(rec));
  }
  std::printf("records: %d, threads: %d\n\n", n, effective_threads());
  std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> scores_serial = kernels::record_scores_serial(
      records, alpha, ScoreKind::symmetric, eps);
  const double scores_serial_ms = ms_since(t0);
  t0 = std::chrono::steady_clock::now();
  const std::vector<double> scores_parallel =
      kernels::record_scores(records, alpha, ScoreKind::symmetric, eps);
  row("record_scores", scores_serial_ms, ms_since(t0),
      scores_serial == scores_parallel);

  const std::vector<double> q{1.3};
  t0 = std::chrono::steady_clock::now();
  const std::vector<PredictionInterval> iv_serial =
      kernels::intervals_at_serial(records, q, alpha, ScoreKind::symmetric,
                                   eps);
  const double iv_serial_ms = ms_since(t0);
  t0 = std::chrono::steady_clock::now();
  const std::vector<PredictionInterval> iv_parallel = kernels::intervals_at(
      records, q, alpha, ScoreKind::symmetric, eps);
  bool iv_same = iv_serial.size() == iv_parallel.size();
  for (std::size_t i = 0; iv_same && i < iv_serial.size(); ++i) {
    iv_same = iv_serial[i].lo == iv_parallel[i].lo &&
              iv_serial[i].hi == iv_parallel[i].hi;
  }
  row("intervals_at", iv_serial_ms, ms_since(t0), iv_same);

  std::vector<double> ys;
  ys.reserve(records.size());
  for (const auto& rec : records) ys.push_back(*rec.y_true);
  t0 = std::chrono::steady_clock::now();
  const std::int64_t cov_serial =
      kernels::covered_count_serial(iv_serial, ys);
  const double cov_serial_ms = ms_since(t0);
  t0 = std::chrono::steady_clock::now();
  const std::int64_t cov_parallel = kernels::covered_count(iv_parallel, ys);
  row("covered_count", cov_serial_ms, ms_since(t0),
      cov_serial == cov_parallel);

  const std::vector<double> levels = default_confidence_levels(19);
  const std::vector<double> thresholds = ece_thresholds(levels);
  std::vector<double> residuals;
  std::vector<double> scales;
  residuals.reserve(records.size());
  scales.reserve(records.size());
  for (const auto& rec : records) {
    residuals.push_back(std::fabs(*rec.y_true - rec.y_hat));
    scales.push_back(std::get<SigmaEstimate>(rec.uncertainty).sigma);
  }
  t0 = std::chrono::steady_clock::now();
  const std::vector<int> hits_serial =
      kernels::first_hit_level_serial(residuals, scales, thresholds);
  const double hits_serial_ms = ms_since(t0);
  t0 = std::chrono::steady_clock::now();
  const std::vector<int> hits_parallel =
      kernels::first_hit_level(residuals, scales, thresholds);
  row("first_hit_level", hits_serial_ms, ms_since(t0),
      hits_serial == hits_parallel);

  const std::span<const RegressionRecord> affine_slice(
      records.data(), std::min<std::size_t>(records.size(), 200000));
  t0 = std::chrono::steady_clock::now();
  const AffineFit fit_serial = affine_calibrate_serial(affine_slice, levels);
  const double affine_serial_ms = ms_since(t0);
  t0 = std::chrono::steady_clock::now();
  const AffineFit fit_parallel = affine_calibrate(affine_slice, levels);
  row("affine_calibrate", affine_serial_ms, ms_since(t0),
      fit_serial.a == fit_parallel.a && fit_serial.b == fit_parallel.b &&
          fit_serial.ece_after == fit_parallel.ece_after);

  SynthConfig synth;
  synth.n_cal = 999;
  synth.n_test = 1000;
  synth.trials = 200;
  synth.seed = 9;
  t0 = std::chrono::steady_clock::now();
  const ExperimentResult exp_serial = run_coverage_experiment_serial(synth);
  const double exp_serial_ms = ms_since(t0);
  t0 = std::chrono::steady_clock::now();
  const ExperimentResult exp_parallel = run_coverage_experiment(synth);
  row("coverage_experiment", exp_serial_ms, ms_since(t0),
      exp_serial.mean_coverage == exp_parallel.mean_coverage &&
          exp_serial.trial_coverage == exp_parallel.trial_coverage);

  return 0;
}
