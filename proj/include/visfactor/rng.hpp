#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

namespace visfactor {

/// Portable seeded generator: xoshiro256** whose state is expanded from the
/// 64-bit seed with splitmix64. All derived draws (integers, reals, normals,
/// shuffles) are implemented here rather than through <random> distributions,
/// whose output differs between standard library implementations.
class SeededRng {
 public:
  using result_type = std::uint64_t;

  explicit SeededRng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept;
  result_type operator()() noexcept { return next_u64(); }
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform01() noexcept;
  double uniform(double lo, double hi) noexcept;
  double normal(double mean, double stddev) noexcept;
  bool bernoulli(double p) noexcept;

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(below(items.size()))];
  }

  /// First `count` indices of a random permutation of [0, n).
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count);

  /// Independent child seed for (master, tag, index); used to give every
  /// generated question its own replayable stream.
  static std::uint64_t derive(std::uint64_t master, std::string_view tag, std::uint64_t index) noexcept;

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace visfactor
