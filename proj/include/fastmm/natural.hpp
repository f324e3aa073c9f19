#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fastmm {

/// Arbitrary-precision nonnegative integer on 32-bit limbs (little-endian).
/// Multiplication is schoolbook below kKaratsubaLimbs and Karatsuba above.
class UnboundedNatural {
 public:
  using Limb = std::uint32_t;
  static constexpr std::size_t kLimbBits = 32;
  static constexpr std::size_t kKaratsubaLimbs = 32;

  UnboundedNatural() = default;
  UnboundedNatural(std::uint64_t v);  // NOLINT: implicit from machine words

  static UnboundedNatural from_limbs(std::vector<Limb> limbs);
  static UnboundedNatural from_decimal(const std::string& s);
  static UnboundedNatural from_hex(const std::string& s);
  /// 2^bits.
  static UnboundedNatural power_of_two(std::size_t bits);

  bool is_zero() const { return limbs_.empty(); }
  std::size_t bit_length() const;
  bool bit(std::size_t i) const;
  const std::vector<Limb>& limbs() const { return limbs_; }

  /// Bits [lo, hi) as a new number.
  UnboundedNatural extract_bits(std::size_t lo, std::size_t hi) const;
  /// Bits [lo, lo+width) with width <= 64.
  std::uint64_t extract_word(std::size_t lo, std::size_t width) const;
  /// Value when it fits in 64 bits; throws std::overflow_error otherwise.
  std::uint64_t to_u64() const;

  std::string to_decimal() const;
  std::string to_hex() const;

  UnboundedNatural& operator+=(const UnboundedNatural& o);
  /// Throws std::domain_error when o > *this.
  UnboundedNatural& operator-=(const UnboundedNatural& o);
  UnboundedNatural& operator<<=(std::size_t bits);
  UnboundedNatural& operator>>=(std::size_t bits);

  friend UnboundedNatural operator+(UnboundedNatural a, const UnboundedNatural& b) { return a += b; }
  friend UnboundedNatural operator-(UnboundedNatural a, const UnboundedNatural& b) { return a -= b; }
  friend UnboundedNatural operator<<(UnboundedNatural a, std::size_t bits) { return a <<= bits; }
  friend UnboundedNatural operator>>(UnboundedNatural a, std::size_t bits) { return a >>= bits; }
  friend UnboundedNatural operator*(const UnboundedNatural& a, const UnboundedNatural& b);

  /// Multiplication with a fixed algorithm, for cross-checking.
  static UnboundedNatural mul_schoolbook(const UnboundedNatural& a, const UnboundedNatural& b);
  static UnboundedNatural mul_karatsuba(const UnboundedNatural& a, const UnboundedNatural& b);

  friend bool operator==(const UnboundedNatural&, const UnboundedNatural&) = default;
  friend std::strong_ordering operator<=>(const UnboundedNatural& a, const UnboundedNatural& b);

 private:
  void trim();
  std::vector<Limb> limbs_;
};

}  // namespace fastmm
