#include <vector>

#include "doctest.h"

#include "confforge/kernels.hpp"
#include "confforge/metrics.hpp"
#include "confforge/rng.hpp"
#include "support.hpp"

using namespace confforge;
using confforge::test::sigma_rec;

namespace {

std::vector<RegressionRecord> random_records(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<RegressionRecord> records;
  records.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double sigma = 0.1 + rng.next_unit();
    records.push_back(sigma_rec("r" + std::to_string(i),
                                sigma * rng.next_normal(), rng.next_normal(),
                                sigma));
  }
  return records;
}

}  // namespace

TEST_CASE("parallel kernels are bitwise identical to their serial twins") {
  const auto records = random_records(2377, 8);
  const auto serial_scores =
      kernels::record_scores_serial(records, 0.1, ScoreKind::symmetric, 1e-8);

  std::vector<double> q_hats(records.size());
  Rng rng(9);
  for (double& q : q_hats) q = rng.next_unit() * 3.0;
  const auto serial_intervals = kernels::intervals_at_serial(
      records, q_hats, 0.1, ScoreKind::symmetric, 1e-8);

  std::vector<double> ys(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    ys[i] = *records[i].y_true;
  }
  const auto serial_covered =
      kernels::covered_count_serial(serial_intervals, ys);

  const auto levels = default_confidence_levels(19);
  const auto thresholds = ece_thresholds(levels);
  const EceInputs in = ece_inputs(records);
  const auto serial_hits = kernels::first_hit_level_serial(
      in.abs_residuals, in.sigmas, thresholds);

  for (int threads : {1, 2, 4}) {
    const auto scores = kernels::record_scores(records, 0.1,
                                               ScoreKind::symmetric, 1e-8,
                                               threads);
    CHECK(scores == serial_scores);

    const auto intervals = kernels::intervals_at(
        records, q_hats, 0.1, ScoreKind::symmetric, 1e-8, threads);
    REQUIRE(intervals.size() == serial_intervals.size());
    bool same = true;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      same = same && intervals[i].lo == serial_intervals[i].lo &&
             intervals[i].hi == serial_intervals[i].hi;
    }
    CHECK(same);

    CHECK(kernels::covered_count(intervals, ys, threads) == serial_covered);
    CHECK(kernels::first_hit_level(in.abs_residuals, in.sigmas, thresholds,
                                   threads) == serial_hits);
  }
}

TEST_CASE("affine search is bitwise identical serial and parallel") {
  const auto records = random_records(600, 10);
  const auto levels = default_confidence_levels(19);
  const AffineFit serial = affine_calibrate_serial(records, levels);
  for (int threads : {1, 2, 4}) {
    const AffineFit parallel = affine_calibrate(records, levels, threads);
    CHECK(parallel.a == serial.a);
    CHECK(parallel.b == serial.b);
    CHECK(parallel.ece_before == serial.ece_before);
    CHECK(parallel.ece_after == serial.ece_after);
  }
}

TEST_CASE("a broadcast quantile matches the per-record vector form") {
  const auto records = random_records(100, 11);
  const std::vector<double> one{1.5};
  const auto broadcast = kernels::intervals_at(records, one, 0.1,
                                               ScoreKind::symmetric, 1e-8);
  std::vector<double> per_record(records.size(), 1.5);
  const auto vectored = kernels::intervals_at(records, per_record, 0.1,
                                              ScoreKind::symmetric, 1e-8);
  REQUIRE(broadcast.size() == records.size());
  bool same = true;
  for (std::size_t i = 0; i < broadcast.size(); ++i) {
    same = same && broadcast[i].lo == vectored[i].lo &&
           broadcast[i].hi == vectored[i].hi;
  }
  CHECK(same);
}

TEST_CASE("covered_count matches the coverage metric") {
  const auto records = random_records(500, 12);
  std::vector<double> ys(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    ys[i] = *records[i].y_true;
  }
  const std::vector<double> q{1.0};
  const auto intervals =
      kernels::intervals_at(records, q, 0.1, ScoreKind::symmetric, 1e-8);
  const double frac = coverage(intervals, ys);
  const auto count = kernels::covered_count(intervals, ys);
  CHECK(frac == static_cast<double>(count) /
                    static_cast<double>(records.size()));
}
