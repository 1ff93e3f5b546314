#include "confforge/error.hpp"

namespace confforge {

const char* errc_name(errc code) {
  switch (code) {
    case errc::invalid_config: return "InvalidConfig";
    case errc::invalid_alpha: return "InvalidAlpha";
    case errc::invalid_tau: return "InvalidTau";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::missing_uncertainty: return "MissingUncertainty";
    case errc::non_finite: return "NonFinite";
    case errc::non_positive_sigma: return "NonPositiveSigma";
    case errc::non_positive_delta: return "NonPositiveDelta";
    case errc::empty_samples: return "EmptySamples";
    case errc::kind_mismatch: return "KindMismatch";
    case errc::missing_ground_truth: return "MissingGroundTruth";
    case errc::missing_attribute: return "MissingAttribute";
    case errc::empty_calibration: return "EmptyCalibration";
    case errc::empty_input: return "EmptyInput";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::insufficient_data: return "InsufficientData";
    case errc::insufficient_group_data: return "InsufficientGroupData";
    case errc::min_bin_too_small: return "MinBinTooSmall";
    case errc::unknown_group: return "UnknownGroup";
    case errc::unsupported_uncertainty: return "UnsupportedUncertainty";
    case errc::unbounded_interval: return "UnboundedInterval";
    case errc::parse_error: return "ParseError";
    case errc::io_error: return "IoError";
    case errc::degenerate_input: return "DegenerateInput";
    case errc::non_finite_loss: return "NonFiniteLoss";
  }
  return "UnknownError";
}

int exit_code_for(errc code) {
  switch (code) {
    case errc::invalid_config:
    case errc::invalid_alpha:
    case errc::invalid_tau:
    case errc::invalid_argument:
      return 1;
    case errc::degenerate_input:
    case errc::non_finite_loss:
      return 3;
    default:
      return 2;
  }
}

}  // namespace confforge
