#include <cmath>
#include <vector>

#include "doctest.h"

#include "confforge/error.hpp"
#include "confforge/probit.hpp"
#include "confforge/rng.hpp"
#include "confforge/scores.hpp"
#include "support.hpp"

using namespace confforge;
using confforge::test::asym_rec;
using confforge::test::samples_rec;
using confforge::test::sigma_rec;

TEST_CASE("samples_to_moments uses the unbiased variance") {
  const std::vector<double> values{0.0, 2.0};
  const Moments m = samples_to_moments(values);
  CHECK(m.mean == 1.0);
  CHECK(m.sigma == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(samples_to_moments(std::vector<double>{1.0}), Error);
}

TEST_CASE("sigma_to_delta applies the two-sided probit factor") {
  CHECK(sigma_to_delta(1.0, 0.1) == probit(0.95));
  CHECK(sigma_to_delta(2.0, 0.1) == probit(0.95) * 2.0);
  CHECK_THROWS_AS(sigma_to_delta(0.0, 0.1), Error);
  CHECK_THROWS_AS(sigma_to_delta(1.0, 0.0), Error);
  CHECK_THROWS_AS(sigma_to_delta(1.0, 1.0), Error);
}

TEST_CASE("symmetric score is the scaled absolute residual") {
  CHECK(score_symmetric(1.0, 0.0, 2.0) == 0.5);
  CHECK(score_symmetric(-1.0, 0.0, 2.0) == 0.5);
  CHECK(score_symmetric(0.0, 0.0, 2.0) == 0.0);
  CHECK_THROWS_AS(score_symmetric(1.0, 0.0, 0.0), Error);
}

TEST_CASE("asymmetric score picks the side of the residual") {
  // Above the prediction the upper delta scales; below, the lower.
  CHECK(score_asymmetric(3.0, 1.0, 0.5, 2.0) == 1.0);
  CHECK(score_asymmetric(0.0, 1.0, 0.5, 2.0) == 2.0);
  CHECK(score_asymmetric(1.0, 1.0, 0.5, 2.0) == 0.0);
}

TEST_CASE("equal deltas reduce the asymmetric score to the symmetric one") {
  Rng rng(2024);
  for (int i = 0; i < 500; ++i) {
    const double y = 4.0 * rng.next_unit() - 2.0;
    const double y_hat = 4.0 * rng.next_unit() - 2.0;
    const double delta = 0.1 + rng.next_unit();
    CHECK(score_asymmetric(y, y_hat, delta, delta) ==
          score_symmetric(y, y_hat, delta));
  }
}

TEST_CASE("heuristics_of resolves sigma records") {
  const auto rec = sigma_rec("r", 1.0, 0.5, 0.2);
  const Heuristic h = heuristics_of(rec, 0.1, ScoreKind::symmetric, 1e-8);
  CHECK(h.y_hat == 0.5);
  CHECK(h.delta_lo == probit(0.95) * 0.2);
  CHECK(h.delta_hi == h.delta_lo);
  CHECK(h.delta() == h.delta_hi);
  CHECK(h.half_width() == h.delta_lo);
  CHECK_FALSE(h.clamped);
}

TEST_CASE("heuristics_of resolves samples through moments") {
  const auto rec = samples_rec("s", 1.0, 1.0, {0.0, 2.0});
  const Heuristic h = heuristics_of(rec, 0.1, ScoreKind::symmetric, 1e-8);
  CHECK(h.delta_lo == probit(0.95) * std::sqrt(2.0));
}

TEST_CASE("heuristics_of clamps tiny deltas and reports it") {
  const auto rec = sigma_rec("t", 0.0, 0.0, 1e-300);
  const Heuristic h = heuristics_of(rec, 0.1, ScoreKind::symmetric, 1e-8);
  CHECK(h.delta_lo == 1e-8);
  CHECK(h.clamped);
}

TEST_CASE("asymmetric estimates are rejected under the symmetric kind") {
  const auto rec = asym_rec("a", 1.0, 0.0, 0.5, 1.5);
  try {
    heuristics_of(rec, 0.1, ScoreKind::symmetric, 1e-8);
    FAIL("expected a kind mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == errc::kind_mismatch);
  }
  const Heuristic h = heuristics_of(rec, 0.1, ScoreKind::asymmetric, 1e-8);
  CHECK(h.delta_lo == 0.5);
  CHECK(h.delta_hi == 1.5);
}

TEST_CASE("sigma records score identically under both kinds") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto rec = sigma_rec("r", rng.next_normal(), rng.next_normal(),
                               0.1 + rng.next_unit());
    const double sym = score_record(rec, 0.1, ScoreKind::symmetric, 1e-8);
    const double asym = score_record(rec, 0.1, ScoreKind::asymmetric, 1e-8);
    CHECK(sym == asym);
  }
}

TEST_CASE("score_record requires ground truth") {
  RegressionRecord rec;
  rec.id = "x";
  rec.y_hat = 0.0;
  rec.uncertainty = SigmaEstimate{1.0};
  try {
    score_record(rec, 0.1, ScoreKind::symmetric, 1e-8);
    FAIL("expected missing ground truth");
  } catch (const Error& e) {
    CHECK(e.code() == errc::missing_ground_truth);
  }
}
