#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace roadcov {

/// Substream tags. Each trial owns one independent stream per tag.
enum class StreamTag : std::uint32_t {
  uav_field = 1,
  uav_los = 2,
  roads = 3,
  access_points = 4,
  fading = 5,
  association = 6,
  generic = 15,
};

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 64-bit key is derived from (master seed, tag) and the upper half of
/// the 128-bit counter holds the trial index, so every (seed, trial, tag)
/// triple addresses a disjoint stream without any shared state.
/// Satisfies UniformRandomBitGenerator.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;

  Philox4x32(std::uint64_t seed, std::uint64_t trial_index,
             StreamTag tag = StreamTag::generic)
      : Philox4x32(seed, trial_index, static_cast<std::uint32_t>(tag)) {}

  Philox4x32(std::uint64_t seed, std::uint64_t trial_index, std::uint32_t tag) {
    const std::uint64_t k = splitmix64(seed ^ splitmix64(0x9e3779b97f4a7c15ULL + tag));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    counter_ = {0u, 0u, static_cast<std::uint32_t>(trial_index),
                static_cast<std::uint32_t>(trial_index >> 32)};
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (index_ == 4) {
      block_ = generate(counter_, key_);
      increment();
      index_ = 0;
    }
    return block_[index_++];
  }

  /// Uniform double in the open interval (0, 1).
  double uniform() {
    const std::uint64_t hi = (*this)();
    const std::uint64_t lo = (*this)();
    const std::uint64_t bits = ((hi << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  static constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block generate(Block ctr, Key key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

  void increment() {
    if (++counter_[0] == 0) ++counter_[1];
  }

  Key key_{};
  Block counter_{};
  Block block_{};
  int index_ = 4;
};

}  // namespace roadcov
