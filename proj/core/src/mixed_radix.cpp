#include "mces/mixed_radix.hpp"

#include <stdexcept>

#include "mces/checked_math.hpp"

namespace mces {

MixedRadix::MixedRadix(std::vector<std::uint32_t> radices) : radices_(std::move(radices)) {
  strides_.assign(radices_.size(), 1);
  std::uint64_t stride = 1;
  for (std::size_t k = radices_.size(); k-- > 0;) {
    if (radices_[k] == 0) throw std::invalid_argument("mixed radix: zero radix");
    strides_[k] = stride;
    stride = checked_mul(stride, radices_[k]);
  }
  size_ = stride;
}

std::uint64_t MixedRadix::encode(std::span<const std::uint32_t> digits) const {
  if (digits.size() != radices_.size()) throw std::invalid_argument("mixed radix: wrong digit count");
  std::uint64_t index = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (digits[k] >= radices_[k]) throw std::out_of_range("mixed radix: digit out of range");
    index += digits[k] * strides_[k];
  }
  return index;
}

std::vector<std::uint32_t> MixedRadix::decode(std::uint64_t index) const {
  if (index >= size_) throw std::out_of_range("mixed radix: index out of range");
  std::vector<std::uint32_t> out(radices_.size());
  for (std::size_t k = 0; k < radices_.size(); ++k) out[k] = digit(index, k);
  return out;
}

}  // namespace mces
