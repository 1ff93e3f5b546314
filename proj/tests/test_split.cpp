#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"

#include "confforge/error.hpp"
#include "confforge/rng.hpp"
#include "confforge/split.hpp"
#include "support.hpp"

using namespace confforge;
using confforge::test::sigma_rec;

namespace {

std::vector<RegressionRecord> grouped_dataset(
    const std::vector<std::pair<std::string, int>>& sizes) {
  std::vector<RegressionRecord> records;
  int serial = 0;
  for (const auto& [group, count] : sizes) {
    for (int i = 0; i < count; ++i) {
      records.push_back(sigma_rec("r" + std::to_string(serial++), 0.0,
                                  0.0, 1.0, group));
    }
  }
  return records;
}

void check_partition(const SplitPlan& plan, std::size_t n,
                     std::size_t cal_size) {
  CHECK(plan.calibration.size() == cal_size);
  CHECK(plan.test.size() == n - cal_size);
  CHECK(std::is_sorted(plan.calibration.begin(), plan.calibration.end()));
  CHECK(std::is_sorted(plan.test.begin(), plan.test.end()));
  std::set<std::size_t> all(plan.calibration.begin(), plan.calibration.end());
  all.insert(plan.test.begin(), plan.test.end());
  CHECK(all.size() == n);
  CHECK(*all.rbegin() == n - 1);
}

}  // namespace

TEST_CASE("split_harness partitions each run exactly") {
  const auto records = grouped_dataset({{"a", 30}, {"b", 20}});
  for (bool stratify : {true, false}) {
    const auto plans = split_harness(records, 4, 20, 17, stratify);
    REQUIRE(plans.size() == 4);
    for (const auto& plan : plans) {
      check_partition(plan, records.size(), 20);
    }
    CHECK(plans[0].calibration != plans[1].calibration);
  }
}

TEST_CASE("split_harness is deterministic in all inputs") {
  const auto records = grouped_dataset({{"a", 40}, {"b", 25}});
  const auto first = split_harness(records, 3, 30, 99, true);
  const auto second = split_harness(records, 3, 30, 99, true);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].seed == second[i].seed);
    CHECK(first[i].calibration == second[i].calibration);
    CHECK(first[i].test == second[i].test);
  }
  const auto other = split_harness(records, 3, 30, 100, true);
  CHECK(first[0].calibration != other[0].calibration);
}

TEST_CASE("stratified quotas split evenly with remainder to largest groups") {
  // cal 10 over 3 groups: base 3 each, remainder 1 to the largest.
  const auto records = grouped_dataset({{"big", 10}, {"mid", 6}, {"sml", 4}});
  const auto plans = split_harness(records, 5, 10, 1, true);
  for (const auto& plan : plans) {
    std::map<std::string, int> counts;
    for (std::size_t idx : plan.calibration) {
      counts[records[idx].group] += 1;
    }
    CHECK(counts["big"] == 4);
    CHECK(counts["mid"] == 3);
    CHECK(counts["sml"] == 3);
  }
}

TEST_CASE("stratified remainder ties break by label") {
  // Equal sizes: the remainder goes to the lexicographically first.
  const auto records = grouped_dataset({{"beta", 8}, {"alph", 8}});
  const auto plans = split_harness(records, 2, 9, 3, true);
  for (const auto& plan : plans) {
    std::map<std::string, int> counts;
    for (std::size_t idx : plan.calibration) {
      counts[records[idx].group] += 1;
    }
    CHECK(counts["alph"] == 5);
    CHECK(counts["beta"] == 4);
  }
}

TEST_CASE("split_harness validates sizes") {
  const auto records = grouped_dataset({{"a", 10}});
  CHECK_THROWS_AS(split_harness(records, 0, 5, 0, true), Error);
  CHECK_THROWS_AS(split_harness(records, 1, 0, 0, true), Error);
  CHECK_THROWS_AS(split_harness(records, 1, 10, 0, true), Error);
  CHECK_THROWS_AS(split_harness(records, 1, 11, 0, false), Error);

  // A group smaller than its ceil(cal/G) share cannot be stratified.
  const auto skewed = grouped_dataset({{"a", 100}, {"b", 3}});
  try {
    split_harness(skewed, 1, 10, 0, true);
    FAIL("expected insufficient group data");
  } catch (const Error& e) {
    CHECK(e.code() == errc::insufficient_group_data);
  }
  // The same draw works unstratified.
  CHECK(split_harness(skewed, 1, 10, 0, false).size() == 1);
}

TEST_CASE("run seeds derive from the master seed stream") {
  const auto records = grouped_dataset({{"a", 12}});
  const auto plans = split_harness(records, 3, 6, 77, false);
  CHECK(plans[0].seed == mix_seed(77, 0));
  CHECK(plans[1].seed == mix_seed(77, 1));
  CHECK(plans[2].seed == mix_seed(77, 2));
}
