// Deterministic random number generation.
//
// splitmix64 core with Lemire bounded integers, Marsaglia polar normals
// and partial Fisher-Yates sampling. std::mt19937 itself is pinned by
// the standard but the distribution adapters on top of it are not, so
// streams produced through <random> differ between standard libraries.
// This generator produces identical streams on any conforming platform
// and is simple enough to reimplement in a few lines elsewhere.
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace confforge {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Finalizer of the splitmix64 step function.
inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a master seed and an index.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64_finalize(master + kGolden * (index + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return splitmix64_finalize(state_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Lemire multiply-shift; n = 0 is invalid.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via the polar method; the spare deviate is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_unit() - 1.0;
      v = 2.0 * next_unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Moves a uniform random sample of k elements to the front of indices
  // (partial Fisher-Yates); the order of the remaining tail is arbitrary
  // but deterministic.
  template <typename T>
  void partial_shuffle(std::vector<T>& items, std::size_t k) {
    const std::size_t n = items.size();
    if (k > n) k = n;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(next_below(n - i));
      std::swap(items[i], items[j]);
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    if (!items.empty()) partial_shuffle(items, items.size() - 1);
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace confforge
