#pragma once

#include <cstdint>
#include <limits>

namespace mces {

/// Counter-based random stream. Every stream is fully determined by
/// (seed, stream id); output k is a bijective mix of key + k * golden, so
/// streams can be created cheaply per trajectory and in any order.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    ++draws_;
    return mix(key_ + draws_ * kGolden);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  __extension__ typedef unsigned __int128 wide;

  /// Uniform integer in [0, n), unbiased (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    wide product = static_cast<wide>((*this)()) * n;
    auto low = static_cast<std::uint64_t>(product);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        product = static_cast<wide>((*this)()) * n;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  std::uint64_t draws() const { return draws_; }
  /// Skips n outputs; a stream rebuilt from (seed, stream) and discard(draws())
  /// continues exactly where the original left off.
  void discard(std::uint64_t n) { draws_ += n; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t draws_ = 0;
};

/// Stream ids used by the learners. Trajectory streams are indexed by
/// ordinal; the high bits separate the remaining purposes.
namespace streams {
inline constexpr std::uint64_t trajectory(std::uint64_t ordinal) { return ordinal; }
inline constexpr std::uint64_t initial_policy() { return 1ULL << 62; }
inline constexpr std::uint64_t exploring(std::uint64_t pick) { return (2ULL << 62) | pick; }
inline constexpr std::uint64_t evaluation(std::uint64_t index) { return (3ULL << 62) | index; }
}  // namespace streams

}  // namespace mces
