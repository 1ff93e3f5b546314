#include "confforge/split.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "confforge/error.hpp"
#include "confforge/rng.hpp"

namespace confforge {

namespace {

std::vector<std::size_t> complement_of(const std::vector<std::size_t>& chosen,
                                       std::size_t n) {
  std::vector<char> taken(n, 0);
  for (std::size_t i : chosen) taken[i] = 1;
  std::vector<std::size_t> rest;
  rest.reserve(n - chosen.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!taken[i]) rest.push_back(i);
  }
  return rest;
}

}  // namespace

std::vector<SplitPlan> split_harness(const std::vector<RegressionRecord>& records,
                                     int k, int cal_size, std::uint64_t seed,
                                     bool stratify) {
  const std::size_t n = records.size();
  if (k < 1) {
    throw Error(errc::invalid_config, "number of runs must be >= 1");
  }
  if (cal_size < 1) {
    throw Error(errc::invalid_config, "calibration size must be >= 1");
  }
  if (static_cast<std::size_t>(cal_size) >= n) {
    throw Error(errc::insufficient_data,
                "calibration size " + std::to_string(cal_size) +
                    " leaves no test records out of " + std::to_string(n));
  }

  // Group membership in dataset order, keyed by label (sorted).
  std::map<std::string, std::vector<std::size_t>> groups;
  if (stratify) {
    for (std::size_t i = 0; i < n; ++i) {
      groups[records[i].group].push_back(i);
    }
  }

  // Per-group calibration quotas: even split, remainder one-each to the
  // largest groups (ties broken by label order).
  std::map<std::string, int> quota;
  if (stratify) {
    const int g = static_cast<int>(groups.size());
    const int base = cal_size / g;
    const int rem = cal_size % g;
    const int need = (cal_size + g - 1) / g;
    std::vector<std::pair<std::string, std::size_t>> by_size;
    for (const auto& [label, members] : groups) {
      if (members.size() < static_cast<std::size_t>(need)) {
        throw Error(errc::insufficient_group_data,
                    "group '" + label + "' has " +
                        std::to_string(members.size()) +
                        " records but stratified calibration needs " +
                        std::to_string(need));
      }
      by_size.emplace_back(label, members.size());
      quota[label] = base;
    }
    std::stable_sort(by_size.begin(), by_size.end(),
                     [](const auto& a, const auto& b) {
                       return a.second > b.second;
                     });
    for (int i = 0; i < rem; ++i) {
      quota[by_size[static_cast<std::size_t>(i)].first] += 1;
    }
  }

  std::vector<SplitPlan> plans;
  plans.reserve(static_cast<std::size_t>(k));
  for (int run = 0; run < k; ++run) {
    SplitPlan plan;
    plan.run_index = run;
    plan.seed = mix_seed(seed, static_cast<std::uint64_t>(run));
    Rng rng(plan.seed);

    std::vector<std::size_t> chosen;
    chosen.reserve(static_cast<std::size_t>(cal_size));
    if (stratify) {
      for (const auto& [label, members] : groups) {
        std::vector<std::size_t> pool = members;
        const std::size_t q = static_cast<std::size_t>(quota[label]);
        rng.partial_shuffle(pool, q);
        chosen.insert(chosen.end(), pool.begin(), pool.begin() + q);
      }
    } else {
      std::vector<std::size_t> pool(n);
      for (std::size_t i = 0; i < n; ++i) pool[i] = i;
      rng.partial_shuffle(pool, static_cast<std::size_t>(cal_size));
      chosen.assign(pool.begin(), pool.begin() + cal_size);
    }
    std::sort(chosen.begin(), chosen.end());
    plan.test = complement_of(chosen, n);
    plan.calibration = std::move(chosen);
    plans.push_back(std::move(plan));
  }
  return plans;
}

}  // namespace confforge
