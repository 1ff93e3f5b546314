#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"

#include "confforge/rng.hpp"

using confforge::mix_seed;
using confforge::Rng;

TEST_CASE("rng reproduces the published splitmix64 sequence for seed 0") {
  Rng rng(0);
  CHECK(rng.next_u64() == 0xE220A8397B1DCDAFull);
  CHECK(rng.next_u64() == 0x6E789E6AA1B965F4ull);
  CHECK(rng.next_u64() == 0x06C45D188009454Full);
  CHECK(rng.next_u64() == 0xF88BB8A8724C81ECull);
  CHECK(rng.next_u64() == 0x1B39896A51A8749Bull);
}

TEST_CASE("rng streams are deterministic per seed") {
  Rng a(42), b(42), c(43);
  bool all_equal = true;
  bool any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t va = a.next_u64();
    all_equal = all_equal && va == b.next_u64();
    any_diff = any_diff || va != c.next_u64();
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("next_unit lies in the half-open unit interval") {
  Rng rng(7);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("next_below is bounded and covers small ranges") {
  Rng rng(11);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t v = rng.next_below(7);
    REQUIRE(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  CHECK(rng.next_below(1) == 0);
}

TEST_CASE("next_normal has roughly standard moments") {
  Rng rng(3);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next_normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.01);
  CHECK(std::fabs(var - 1.0) < 0.02);
}

TEST_CASE("mix_seed decorrelates run indices") {
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    seen.insert(mix_seed(123, i));
  }
  CHECK(seen.size() == 1000);
  CHECK(mix_seed(123, 0) != mix_seed(124, 0));
}

TEST_CASE("partial_shuffle permutes and leaves a stable prefix") {
  std::vector<int> full(50);
  std::iota(full.begin(), full.end(), 0);
  std::vector<int> part = full;

  Rng r1(99), r2(99);
  r1.partial_shuffle(full, full.size());
  r2.partial_shuffle(part, 10);

  std::vector<int> sorted = full;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);

  // The first k draws of a full shuffle never revisit positions < k,
  // so the partial prefix matches the full shuffle bit for bit.
  for (int i = 0; i < 10; ++i) CHECK(full[i] == part[i]);
}

TEST_CASE("partial_shuffle with k of zero is a no-op") {
  std::vector<int> items{1, 2, 3};
  Rng rng(5);
  rng.partial_shuffle(items, 0);
  CHECK(items == std::vector<int>{1, 2, 3});
}
