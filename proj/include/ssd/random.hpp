#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace ssd {

/// Seeded generator with platform-independent draws.
///
/// std::mt19937_64 output is fully specified by the standard, but the
/// standard distributions are not, so bounded draws are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    // Rejection on the top of the range keeps the result unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Moves k uniformly chosen elements (without replacement) to the front.
  template <class T>
  void partial_shuffle(std::span<T> items, std::size_t k) {
    const std::size_t n = items.size();
    if (k > n) k = n;
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
      const auto j = i + static_cast<std::size_t>(below(n - i));
      using std::swap;
      swap(items[i], items[j]);
    }
  }

  template <class T>
  void shuffle(std::span<T> items) {
    partial_shuffle(items, items.size());
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ssd
