#pragma once

#include <cstdint>
#include <limits>

namespace goflab {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class StreamPurpose : std::uint64_t {
  covariates = 1,
  noise = 2,
  responses = 3,
  grouping = 4,
};

/// Counter-based random stream. The key is a hash of (seed, realization
/// index, purpose); the k-th output is mix64(key + (k + 1) * golden), so a
/// stream depends only on its key, never on which thread draws it or when.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  explicit StreamRng(std::uint64_t key) noexcept : key_(key) {}
  StreamRng(std::uint64_t seed, std::uint64_t index, StreamPurpose purpose) noexcept
      : key_(mix64(mix64(mix64(seed) + index) ^
                   (static_cast<std::uint64_t>(purpose) * kGolden))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return mix64(key_ + (++counter_) * kGolden); }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace goflab
