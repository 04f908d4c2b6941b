#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mces {

/// Mixed-radix encoding of per-agent symbols into one index. Agent 0 is the
/// most significant digit, so index order equals lexicographic tuple order.
class MixedRadix {
 public:
  MixedRadix() = default;
  explicit MixedRadix(std::vector<std::uint32_t> radices);

  std::size_t digits() const { return radices_.size(); }
  std::uint64_t size() const { return size_; }
  std::uint32_t radix(std::size_t position) const { return radices_[position]; }

  std::uint64_t encode(std::span<const std::uint32_t> digits) const;
  std::vector<std::uint32_t> decode(std::uint64_t index) const;

  std::uint32_t digit(std::uint64_t index, std::size_t position) const {
    return static_cast<std::uint32_t>((index / strides_[position]) % radices_[position]);
  }

  /// Index with the digit at `position` replaced.
  std::uint64_t with_digit(std::uint64_t index, std::size_t position, std::uint32_t value) const {
    const std::uint64_t old = digit(index, position);
    return index - old * strides_[position] + static_cast<std::uint64_t>(value) * strides_[position];
  }

 private:
  std::vector<std::uint32_t> radices_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t size_ = 1;
};

}  // namespace mces
