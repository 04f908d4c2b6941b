#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mces {

// Exact unsigned arithmetic that throws instead of wrapping.

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw std::overflow_error("integer overflow in addition: " + std::to_string(a) + " + " +
                              std::to_string(b));
  }
  return out;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw std::overflow_error("integer overflow in multiplication: " + std::to_string(a) + " * " +
                              std::to_string(b));
  }
  return out;
}

inline std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exponent) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) out = checked_mul(out, base);
  return out;
}

}  // namespace mces
