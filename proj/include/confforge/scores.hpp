// Non-conformity scores and per-record heuristic interval parameters.
#pragma once

#include <span>

#include "confforge/record.hpp"

namespace confforge {

enum class ScoreKind { symmetric, asymmetric };

struct Moments {
  double mean;
  double sigma;  // unbiased (n-1) standard deviation
};

// Mean and standard deviation of an ensemble of point predictions.
// Requires at least 2 values; sigma may be 0 for constant samples.
Moments samples_to_moments(std::span<const double> values);

// Half-width of a central (1 - alpha) normal interval with scale sigma.
double sigma_to_delta(double sigma, double alpha);

// |y - y_hat| / delta; delta must be > 0.
double score_symmetric(double y, double y_hat, double delta);

// (y - y_hat) / delta_hi above the prediction, (y_hat - y) / delta_lo
// below it. Equals score_symmetric exactly when the deltas are equal.
double score_asymmetric(double y, double y_hat, double delta_lo,
                        double delta_hi);

// Per-record interval parameters extracted from whichever uncertainty
// representation the record carries.
struct Heuristic {
  ScoreKind kind;
  double y_hat;
  double delta_lo;
  double delta_hi;  // == delta_lo for the symmetric kind
  bool clamped;     // true when a delta was raised to the floor

  double delta() const { return delta_hi; }
  double half_width() const { return 0.5 * (delta_lo + delta_hi); }
};

// Resolves a record to (y_hat, deltas) at miscoverage level alpha.
// Sigma converts through sigma_to_delta; Samples reduce to moments and
// then convert like Sigma; an Asymmetric estimate passes through but is
// rejected under the symmetric kind (KindMismatch). Under the
// asymmetric kind a Sigma-derived delta is used on both sides. Deltas
// are clamped below at eps_delta.
Heuristic heuristics_of(const RegressionRecord& record, double alpha,
                        ScoreKind kind, double eps_delta = 1e-8);

// Non-conformity score of a record with known ground truth.
double score_record(const RegressionRecord& record, double alpha,
                    ScoreKind kind, double eps_delta = 1e-8);

}  // namespace confforge
