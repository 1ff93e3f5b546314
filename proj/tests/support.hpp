// Shared record builders for the unit tests.
#pragma once

#include <string>
#include <vector>

#include "confforge/record.hpp"

namespace confforge::test {

inline RegressionRecord sigma_rec(const std::string& id, double y,
                                  double y_hat, double sigma,
                                  const std::string& group = "") {
  RegressionRecord rec;
  rec.id = id;
  rec.group = group;
  rec.y_true = y;
  rec.y_hat = y_hat;
  rec.uncertainty = SigmaEstimate{sigma};
  return rec;
}

inline RegressionRecord asym_rec(const std::string& id, double y, double y_hat,
                                 double delta_lo, double delta_hi,
                                 const std::string& group = "") {
  RegressionRecord rec;
  rec.id = id;
  rec.group = group;
  rec.y_true = y;
  rec.y_hat = y_hat;
  rec.uncertainty = AsymmetricEstimate{delta_lo, delta_hi};
  return rec;
}

inline RegressionRecord samples_rec(const std::string& id, double y,
                                    double y_hat,
                                    const std::vector<double>& values) {
  RegressionRecord rec;
  rec.id = id;
  rec.y_true = y;
  rec.y_hat = y_hat;
  rec.uncertainty = SamplesEstimate{values};
  return rec;
}

}  // namespace confforge::test
