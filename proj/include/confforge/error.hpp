// Error taxonomy shared by the library and the command line tool.
// Every failure carries a code so callers can map it to a process
// exit status without parsing messages.
#pragma once

#include <stdexcept>
#include <string>

namespace confforge {

enum class errc {
  // usage / configuration
  invalid_config,
  invalid_alpha,
  invalid_tau,
  invalid_argument,
  // data / validation
  missing_uncertainty,
  non_finite,
  non_positive_sigma,
  non_positive_delta,
  empty_samples,
  kind_mismatch,
  missing_ground_truth,
  missing_attribute,
  empty_calibration,
  empty_input,
  length_mismatch,
  dimension_mismatch,
  insufficient_data,
  insufficient_group_data,
  min_bin_too_small,
  unknown_group,
  unsupported_uncertainty,
  unbounded_interval,
  parse_error,
  io_error,
  // numerical
  degenerate_input,
  non_finite_loss,
};

const char* errc_name(errc code);

// Process exit status: 1 usage/config, 2 data/validation, 3 numerical.
int exit_code_for(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const { return code_; }
  int exit_code() const { return exit_code_for(code_); }

 private:
  errc code_;
};

}  // namespace confforge
