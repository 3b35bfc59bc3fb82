#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace tgk {

/// SplitMix64 step; the seed-splitting primitive for every random stream.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of child stream `stream` of `parent`. Distinct (parent, stream) pairs
/// give statistically independent streams; the mapping is fixed so results
/// are reproducible across platforms.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream);

/// Platform-stable random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; all distributions are implemented here
/// because the std:: ones are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform_index(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return p >= 1.0 || uniform01() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform_index(i)]);
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

  /// k distinct values from [0, n), in selection order.
  std::vector<std::size_t> choose(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace tgk
