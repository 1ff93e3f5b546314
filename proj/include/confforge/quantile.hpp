// Linear quantile regression by minibatch subgradient descent on the
// pinball loss, and the interval heuristics derived from fitted
// quantile triples.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace confforge {

// (y_hat - y) * (1{y <= y_hat} - tau). At the kink (y == y_hat) the
// subgradient uses the indicator's value 1.
double pinball_loss(double y_hat, double y, double tau);

struct QuantileModel {
  double tau;
  std::vector<double> weights;
  double bias;

  double predict(std::span<const double> x) const;
};

struct FitHyper {
  double learning_rate = 0.05;  // decays as 1 / sqrt(epoch)
  int epochs = 200;
  int batch_size = 256;
  std::uint64_t seed = 0;
};

struct FitResult {
  QuantileModel model;
  std::vector<double> loss_trace;  // mean pinball loss per epoch
};

// Fits w, b minimizing mean pinball loss at tau. Deterministic for a
// fixed seed. Features should be standardized by the caller for
// well-conditioned steps; see Standardizer.
FitResult fit_quantile(const std::vector<std::vector<double>>& features,
                       std::span<const double> targets, double tau,
                       const FitHyper& hyper = {});

// Per-column affine feature transform (x - mean) / scale with the
// population standard deviation as scale; constant columns use 1.
struct Standardizer {
  std::vector<double> means;
  std::vector<double> scales;

  static Standardizer fit(const std::vector<std::vector<double>>& features);
  std::vector<std::vector<double>> transform(
      const std::vector<std::vector<double>>& features) const;
  // Rewrites a model fitted on standardized features so it applies to
  // raw features directly.
  QuantileModel unfold(const QuantileModel& model) const;
};

struct QuantileTriple {
  QuantileModel lo;   // tau_lo
  QuantileModel med;  // 0.5
  QuantileModel hi;   // 1 - tau_lo
};

// Non-symmetric heuristic from three quantile predictions:
// y_hat = q_med, delta_lo = q_med - q_lo, delta_hi = q_hi - q_med,
// each clamped below at eps_delta. crossed reports that clamping fired
// (quantiles out of order or collapsed).
struct TripleHeuristic {
  double y_hat;
  double delta_lo;
  double delta_hi;
  bool crossed;
};
TripleHeuristic triple_heuristic(double q_lo, double q_med, double q_hi,
                                 double eps_delta = 1e-8);

// Symmetric variant: y_hat is the midpoint of (q_lo, q_hi) and delta
// half their spread, clamped below at eps_delta.
struct TripleSymHeuristic {
  double y_hat;
  double delta;
  bool crossed;
};
TripleSymHeuristic triple_sym_heuristic(double q_lo, double q_hi,
                                        double eps_delta = 1e-8);

// Versioned plain-text model persistence: tau, feature dimension,
// weights and bias in full decimal precision.
void save_triple(std::ostream& out, const QuantileTriple& triple);
QuantileTriple load_triple(std::istream& in);

}  // namespace confforge
