#pragma once

#include <cstdint>
#include <limits>

namespace distq {

/// Counter-based, splittable random stream.
///
/// A stream is identified by a 64-bit key; the n-th output is a pure
/// function of (key, n), computed with the SplitMix64 finalizer over a Weyl
/// sequence. `split(i)` derives an independent child key, so per-task
/// streams can be created in any order and on any thread without changing
/// what each task observes.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  /// Child stream for sub-task `index`. Does not advance this stream.
  Rng split(std::uint64_t index) const noexcept;

  std::uint64_t next_u64() noexcept;
  result_type operator()() noexcept { return next_u64(); }

  /// Uniform variate in the open interval (0, 1).
  double uniform() noexcept;

  /// One Bernoulli(p) draw; p outside [0, 1] is clamped.
  bool bernoulli(double p) noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

 private:
  Rng(std::uint64_t key, std::uint64_t counter) noexcept : key_(key), counter_(counter) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 output mix.
std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace distq
