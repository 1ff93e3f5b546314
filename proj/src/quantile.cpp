#include "confforge/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "confforge/error.hpp"
#include "confforge/fmt.hpp"
#include "confforge/rng.hpp"

namespace confforge {

double pinball_loss(double y_hat, double y, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw Error(errc::invalid_tau, "tau must be in (0, 1)");
  }
  const double indicator = (y <= y_hat) ? 1.0 : 0.0;
  return (y_hat - y) * (indicator - tau);
}

double QuantileModel::predict(std::span<const double> x) const {
  if (x.size() != weights.size()) {
    throw Error(errc::dimension_mismatch,
                "feature vector has dimension " + std::to_string(x.size()) +
                    ", model expects " + std::to_string(weights.size()));
  }
  double acc = bias;
  for (std::size_t d = 0; d < weights.size(); ++d) {
    acc += weights[d] * x[d];
  }
  return acc;
}

FitResult fit_quantile(const std::vector<std::vector<double>>& features,
                       std::span<const double> targets, double tau,
                       const FitHyper& hyper) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw Error(errc::invalid_tau, "tau must be in (0, 1)");
  }
  const std::size_t n = features.size();
  if (n == 0) {
    throw Error(errc::empty_input, "no training rows");
  }
  if (targets.size() != n) {
    throw Error(errc::length_mismatch,
                "features and targets differ in length");
  }
  const std::size_t dim = features[0].size();
  if (dim == 0) {
    throw Error(errc::dimension_mismatch, "need at least one feature");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (features[i].size() != dim) {
      throw Error(errc::dimension_mismatch,
                  "row " + std::to_string(i) + " has dimension " +
                      std::to_string(features[i].size()) + ", expected " +
                      std::to_string(dim));
    }
    for (double v : features[i]) {
      if (!std::isfinite(v)) {
        throw Error(errc::non_finite, "non-finite feature value");
      }
    }
    if (!std::isfinite(targets[i])) {
      throw Error(errc::non_finite, "non-finite target value");
    }
  }
  if (!(hyper.learning_rate > 0.0) || hyper.epochs < 1 ||
      hyper.batch_size < 1) {
    throw Error(errc::invalid_config,
                "learning rate, epochs and batch size must be positive");
  }

  QuantileModel model;
  model.tau = tau;
  model.weights.assign(dim, 0.0);
  model.bias = 0.0;

  Rng rng(hyper.seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  const std::size_t bs = static_cast<std::size_t>(hyper.batch_size);
  std::vector<double> grad_w(dim);
  std::vector<double> loss_trace;
  loss_trace.reserve(static_cast<std::size_t>(hyper.epochs));

  for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
    const double lr =
        hyper.learning_rate / std::sqrt(static_cast<double>(epoch));
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += bs) {
      const std::size_t count = std::min(bs, n - start);
      std::fill(grad_w.begin(), grad_w.end(), 0.0);
      double grad_b = 0.0;
      for (std::size_t k = start; k < start + count; ++k) {
        const std::size_t i = order[k];
        const std::vector<double>& x = features[i];
        double pred = model.bias;
        for (std::size_t d = 0; d < dim; ++d) {
          pred += model.weights[d] * x[d];
        }
        const double g = ((targets[i] <= pred) ? 1.0 : 0.0) - tau;
        grad_b += g;
        for (std::size_t d = 0; d < dim; ++d) {
          grad_w[d] += g * x[d];
        }
        loss_sum += (pred - targets[i]) * (((targets[i] <= pred) ? 1.0 : 0.0) - tau);
      }
      const double inv = 1.0 / static_cast<double>(count);
      for (std::size_t d = 0; d < dim; ++d) {
        model.weights[d] -= lr * (grad_w[d] * inv);
      }
      model.bias -= lr * (grad_b * inv);
    }
    const double mean_loss = loss_sum / static_cast<double>(n);
    if (!std::isfinite(mean_loss)) {
      throw Error(errc::non_finite_loss,
                  "loss diverged at epoch " + std::to_string(epoch));
    }
    loss_trace.push_back(mean_loss);
  }
  return {std::move(model), std::move(loss_trace)};
}

Standardizer Standardizer::fit(
    const std::vector<std::vector<double>>& features) {
  if (features.empty() || features[0].empty()) {
    throw Error(errc::empty_input, "no features to standardize");
  }
  const std::size_t n = features.size();
  const std::size_t dim = features[0].size();
  Standardizer st;
  st.means.assign(dim, 0.0);
  st.scales.assign(dim, 0.0);
  for (const auto& row : features) {
    for (std::size_t d = 0; d < dim; ++d) st.means[d] += row[d];
  }
  for (std::size_t d = 0; d < dim; ++d) {
    st.means[d] /= static_cast<double>(n);
  }
  for (const auto& row : features) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double c = row[d] - st.means[d];
      st.scales[d] += c * c;
    }
  }
  for (std::size_t d = 0; d < dim; ++d) {
    st.scales[d] = std::sqrt(st.scales[d] / static_cast<double>(n));
    if (st.scales[d] == 0.0) st.scales[d] = 1.0;
  }
  return st;
}

std::vector<std::vector<double>> Standardizer::transform(
    const std::vector<std::vector<double>>& features) const {
  std::vector<std::vector<double>> out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != means.size()) {
      throw Error(errc::dimension_mismatch, "row dimension mismatch");
    }
    out[i].resize(means.size());
    for (std::size_t d = 0; d < means.size(); ++d) {
      out[i][d] = (features[i][d] - means[d]) / scales[d];
    }
  }
  return out;
}

QuantileModel Standardizer::unfold(const QuantileModel& model) const {
  if (model.weights.size() != means.size()) {
    throw Error(errc::dimension_mismatch, "model dimension mismatch");
  }
  QuantileModel raw;
  raw.tau = model.tau;
  raw.weights.resize(model.weights.size());
  raw.bias = model.bias;
  for (std::size_t d = 0; d < model.weights.size(); ++d) {
    raw.weights[d] = model.weights[d] / scales[d];
    raw.bias -= raw.weights[d] * means[d];
  }
  return raw;
}

TripleHeuristic triple_heuristic(double q_lo, double q_med, double q_hi,
                                 double eps_delta) {
  TripleHeuristic h;
  h.y_hat = q_med;
  h.delta_lo = q_med - q_lo;
  h.delta_hi = q_hi - q_med;
  h.crossed = (h.delta_lo < eps_delta) || (h.delta_hi < eps_delta);
  if (h.delta_lo < eps_delta) h.delta_lo = eps_delta;
  if (h.delta_hi < eps_delta) h.delta_hi = eps_delta;
  return h;
}

TripleSymHeuristic triple_sym_heuristic(double q_lo, double q_hi,
                                        double eps_delta) {
  TripleSymHeuristic h;
  h.y_hat = 0.5 * (q_lo + q_hi);
  h.delta = 0.5 * (q_hi - q_lo);
  h.crossed = h.delta < eps_delta;
  if (h.delta < eps_delta) h.delta = eps_delta;
  return h;
}

namespace {

constexpr const char* kTripleHeader = "confforge-quantile-triple v1";

void save_model(std::ostream& out, const QuantileModel& model) {
  out << "tau " << format_double(model.tau) << "\n";
  out << "weights";
  for (double w : model.weights) {
    out << " " << format_double(w);
  }
  out << "\n";
  out << "bias " << format_double(model.bias) << "\n";
}

QuantileModel load_model(std::istream& in, std::size_t dim) {
  std::string line;
  QuantileModel model;
  if (!std::getline(in, line)) {
    throw Error(errc::parse_error, "truncated model file: missing tau line");
  }
  {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key >> model.tau) || key != "tau") {
      throw Error(errc::parse_error, "expected 'tau <value>', got '" + line + "'");
    }
  }
  if (!std::getline(in, line)) {
    throw Error(errc::parse_error,
                "truncated model file: missing weights line");
  }
  {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key != "weights") {
      throw Error(errc::parse_error,
                  "expected 'weights ...', got '" + line + "'");
    }
    double w;
    while (ls >> w) model.weights.push_back(w);
    if (model.weights.size() != dim) {
      throw Error(errc::parse_error,
                  "expected " + std::to_string(dim) + " weights, got " +
                      std::to_string(model.weights.size()));
    }
  }
  if (!std::getline(in, line)) {
    throw Error(errc::parse_error, "truncated model file: missing bias line");
  }
  {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key >> model.bias) || key != "bias") {
      throw Error(errc::parse_error,
                  "expected 'bias <value>', got '" + line + "'");
    }
  }
  return model;
}

}  // namespace

void save_triple(std::ostream& out, const QuantileTriple& triple) {
  const std::size_t dim = triple.med.weights.size();
  if (triple.lo.weights.size() != dim || triple.hi.weights.size() != dim) {
    throw Error(errc::dimension_mismatch,
                "triple members have different dimensions");
  }
  out << kTripleHeader << "\n";
  out << "dim " << dim << "\n";
  save_model(out, triple.lo);
  save_model(out, triple.med);
  save_model(out, triple.hi);
}

QuantileTriple load_triple(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTripleHeader) {
    throw Error(errc::parse_error,
                "not a quantile triple file (bad or missing header)");
  }
  if (!std::getline(in, line)) {
    throw Error(errc::parse_error, "truncated model file: missing dim line");
  }
  std::size_t dim = 0;
  {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key >> dim) || key != "dim" || dim == 0) {
      throw Error(errc::parse_error, "expected 'dim <n>', got '" + line + "'");
    }
  }
  QuantileTriple triple;
  triple.lo = load_model(in, dim);
  triple.med = load_model(in, dim);
  triple.hi = load_model(in, dim);
  for (const QuantileModel* m : {&triple.lo, &triple.med, &triple.hi}) {
    if (!(m->tau > 0.0 && m->tau < 1.0)) {
      throw Error(errc::invalid_tau, "stored tau outside (0, 1)");
    }
  }
  return triple;
}

}  // namespace confforge
