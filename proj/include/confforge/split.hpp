// Repeated calibration/test splitting with optional group stratification.
#pragma once

#include <cstdint>
#include <vector>

#include "confforge/record.hpp"

namespace confforge {

struct SplitPlan {
  int run_index;
  std::uint64_t seed;  // per-run stream seed derived from the master seed
  std::vector<std::size_t> calibration;  // dataset indices, ascending
  std::vector<std::size_t> test;         // complement, ascending
};

// Produces k disjoint calibration/test partitions of the dataset, each
// with exactly cal_size calibration records. The same (records, k,
// cal_size, seed, stratify) always yields identical plans. With
// stratification, calibration quotas are split as evenly as possible
// across group labels and the remainder goes one-each to the largest
// groups (ties by label); every group must hold at least
// ceil(cal_size / #groups) records.
std::vector<SplitPlan> split_harness(const std::vector<RegressionRecord>& records,
                                     int k, int cal_size, std::uint64_t seed,
                                     bool stratify);

}  // namespace confforge
