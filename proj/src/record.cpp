#include "confforge/record.hpp"

#include <cmath>

#include "confforge/error.hpp"
#include "confforge/scores.hpp"

namespace confforge {

namespace {

bool finite_or_absent(const std::optional<double>& v) {
  return !v.has_value() || std::isfinite(*v);
}

}  // namespace

RegressionRecord validate_record(const RawRecord& raw,
                                 const ValidateOptions& options) {
  const bool has_sigma = raw.sigma.has_value();
  const bool has_pair = raw.delta_lo.has_value() || raw.delta_hi.has_value();
  const bool has_delta = raw.delta.has_value();
  const bool has_samples = raw.samples.has_value();
  const int representations = static_cast<int>(has_sigma) +
                              static_cast<int>(has_pair) +
                              static_cast<int>(has_delta) +
                              static_cast<int>(has_samples);
  if (representations == 0) {
    throw Error(errc::missing_uncertainty,
                "record '" + raw.id + "' has no uncertainty estimate");
  }
  if (representations > 1) {
    throw Error(errc::missing_uncertainty,
                "record '" + raw.id +
                    "' mixes uncertainty representations; provide exactly one "
                    "of sigma, delta_lo/delta_hi, delta, samples");
  }
  if (has_pair && (!raw.delta_lo.has_value() || !raw.delta_hi.has_value())) {
    throw Error(errc::missing_uncertainty,
                "record '" + raw.id +
                    "' must provide both delta_lo and delta_hi");
  }

  if (!finite_or_absent(raw.y) || !finite_or_absent(raw.y_hat) ||
      !finite_or_absent(raw.sigma) || !finite_or_absent(raw.delta_lo) ||
      !finite_or_absent(raw.delta_hi) || !finite_or_absent(raw.delta)) {
    throw Error(errc::non_finite,
                "record '" + raw.id + "' has a non-finite field");
  }
  for (const auto& [name, value] : raw.attrs) {
    if (!std::isfinite(value)) {
      throw Error(errc::non_finite, "record '" + raw.id +
                                        "' has non-finite attribute '" + name +
                                        "'");
    }
  }

  RegressionRecord rec;
  rec.id = raw.id;
  rec.group = raw.group;
  rec.y_true = raw.y;
  rec.attrs = raw.attrs;

  if (has_samples) {
    const auto& values = *raw.samples;
    if (values.size() < 2) {
      throw Error(errc::empty_samples,
                  "record '" + raw.id + "' needs at least 2 samples");
    }
    for (double v : values) {
      if (!std::isfinite(v)) {
        throw Error(errc::non_finite,
                    "record '" + raw.id + "' has a non-finite sample");
      }
    }
    rec.uncertainty = SamplesEstimate{values};
    if (raw.y_hat.has_value()) {
      rec.y_hat = *raw.y_hat;
    } else {
      rec.y_hat = samples_to_moments(values).mean;
    }
    return rec;
  }

  if (!raw.y_hat.has_value()) {
    throw Error(errc::non_finite, "record '" + raw.id + "' is missing y_hat");
  }
  rec.y_hat = *raw.y_hat;

  if (has_sigma) {
    double sigma = *raw.sigma;
    if (sigma < 0.0) {
      throw Error(errc::non_positive_sigma,
                  "record '" + raw.id + "' has sigma < 0");
    }
    if (sigma == 0.0) {
      if (!options.clamp_zero_uncertainty) {
        throw Error(errc::non_positive_sigma,
                    "record '" + raw.id + "' has sigma = 0 (pass the clamp "
                    "option to raise it to the floor)");
      }
      sigma = options.eps_delta;
    }
    rec.uncertainty = SigmaEstimate{sigma};
    return rec;
  }

  double lo = has_delta ? *raw.delta : *raw.delta_lo;
  double hi = has_delta ? *raw.delta : *raw.delta_hi;
  if (lo < 0.0 || hi < 0.0) {
    throw Error(errc::non_positive_delta,
                "record '" + raw.id + "' has a negative delta");
  }
  if (lo == 0.0 && hi == 0.0) {
    if (!options.clamp_zero_uncertainty) {
      throw Error(errc::non_positive_delta,
                  "record '" + raw.id + "' has a zero/zero delta pair (pass "
                  "the clamp option to raise them to the floor)");
    }
    lo = options.eps_delta;
    hi = options.eps_delta;
  }
  rec.uncertainty = AsymmetricEstimate{lo, hi};
  return rec;
}

}  // namespace confforge
