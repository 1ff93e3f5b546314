// Core dataset row: a point prediction plus one uncertainty estimate,
// with optional ground truth, a group label and named numeric attributes.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace confforge {

struct SigmaEstimate {
  double sigma;  // > 0
};

struct AsymmetricEstimate {
  double delta_lo;  // >= 0
  double delta_hi;  // >= 0, at least one of the pair > 0
};

struct SamplesEstimate {
  std::vector<double> values;  // length >= 2, all finite
};

using UncertaintyEstimate =
    std::variant<SigmaEstimate, AsymmetricEstimate, SamplesEstimate>;

struct RegressionRecord {
  std::string id;
  std::string group;  // empty string = ungrouped
  std::optional<double> y_true;
  double y_hat = 0.0;
  UncertaintyEstimate uncertainty;
  std::map<std::string, double> attrs;

  bool has_y() const { return y_true.has_value(); }
};

// One row as parsed from an input file, before validation. Absent
// fields stay unset; validation decides what is an error.
struct RawRecord {
  std::string id;
  std::string group;
  std::optional<double> y;
  std::optional<double> y_hat;
  std::optional<double> sigma;
  std::optional<double> delta_lo;
  std::optional<double> delta_hi;
  std::optional<double> delta;  // shorthand for delta_lo = delta_hi = delta
  std::optional<std::vector<double>> samples;
  std::map<std::string, double> attrs;
};

struct ValidateOptions {
  // When true, a zero sigma or a zero/zero delta pair is raised to
  // eps_delta instead of being rejected.
  bool clamp_zero_uncertainty = false;
  double eps_delta = 1e-8;
};

// Turns a raw row into a well-formed record or throws Error with one
// of: MissingUncertainty, NonFinite, NonPositiveSigma, NonPositiveDelta,
// EmptySamples. Exactly one uncertainty representation must be present.
// When samples are given and y_hat is absent, y_hat defaults to the
// sample mean.
RegressionRecord validate_record(const RawRecord& raw,
                                 const ValidateOptions& options = {});

}  // namespace confforge
