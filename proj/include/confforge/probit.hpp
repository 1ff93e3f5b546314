// Inverse CDF of the standard normal distribution.
#pragma once

namespace confforge {

// probit(p) for p in (0, 1). Wichura's AS241 rational approximation
// (PPND16 variant), accurate to about 1e-15 absolute over the full
// open interval. Throws Error(errc::invalid_argument) outside (0, 1).
double probit(double p);

// Standard normal CDF via erfc, used as an independent cross-check of
// probit in the test suite.
double normal_cdf(double x);

}  // namespace confforge
