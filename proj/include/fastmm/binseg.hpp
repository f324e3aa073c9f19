#pragma once

#include "fastmm/natural.hpp"
#include "fastmm/ring.hpp"

#include <cstdint>
#include <vector>

namespace fastmm::binseg {

using Digit = std::uint64_t;

/// Radix 2^radix_bits, `length` digits. radix_bits must lie in 1..64.
struct SegmentCodec {
  std::size_t radix_bits = 1;
  std::size_t length = 1;
};

/// Per-call record of the long multiplications performed.
struct Stats {
  std::size_t long_mults = 0;
  std::size_t radix_bits = 0;
  std::size_t lhs_bits = 0;      // bit length of the left encoded operand
  std::size_t rhs_bits = 0;
  std::size_t product_bits = 0;
  std::size_t pieces = 1;        // subproblems after budget splitting
};

/// ⌈log2 n⌉ for n >= 1.
std::size_t ceil_log2(std::size_t n);

/// Σ v_i 2^{k i}. Throws std::out_of_range on an entry >= 2^k.
UnboundedNatural encode(const std::vector<Digit>& v, const SegmentCodec& codec);
/// Base-2^k digits of N. Throws std::out_of_range when N >= 2^{k n}.
std::vector<Digit> decode(const UnboundedNatural& N, const SegmentCodec& codec);

/// Σ u_i v_i for u_i < 2^g, v_i < 2^h from digit n-1 of u(2^k)·v_rev(2^k),
/// k = g + h + ⌈log2 n⌉. One long multiplication.
Digit inner_product(const std::vector<Digit>& u, const std::vector<Digit>& v, std::size_t g, std::size_t h,
                    Stats* stats = nullptr);

/// Σ v_i for v_i < 2^h: the inner product with the all-ones vector,
/// k = h + ⌈log2 n⌉.
Digit sum(const std::vector<Digit>& v, std::size_t h, Stats* stats = nullptr);

/// Convolution of p and q (coefficients < 2^bound) from all digits of one
/// long product, k = 2·bound + ⌈log2 min(|p|,|q|)⌉.
std::vector<Digit> poly_mult(const std::vector<Digit>& p, const std::vector<Digit>& q, std::size_t bound,
                             Stats* stats = nullptr);

/// O(|p||q|) reference convolution.
std::vector<Digit> convolve_schoolbook(const std::vector<Digit>& p, const std::vector<Digit>& q);

struct Shifted {
  std::vector<Digit> values;  // v_i - offset
  std::int64_t offset = 0;
};

/// Shifts a signed vector into [0, r - q) using q = min(v) (or the given q,
/// which must not exceed min(v)).
Shifted shift_signed(const std::vector<std::int64_t>& v);
Shifted shift_signed(const std::vector<std::int64_t>& v, std::int64_t q);

/// Σ v_i through the shifted sum plus n·q.
Integer signed_sum(const std::vector<std::int64_t>& v, Stats* stats = nullptr);
/// Σ v_i w_i = Σ u_i u'_i + q'Σ u_i + qΣ u'_i + n q q' for u = v - q, u' = w - q'.
Integer signed_inner_product(const std::vector<std::int64_t>& v, const std::vector<std::int64_t>& w,
                             Stats* stats = nullptr);

/// Inner product that keeps every long product within `budget_bits` by
/// splitting into 2^s equal-length subvectors (smallest s that fits) and
/// adding the partial results.
Integer inner_product_budgeted(const std::vector<Digit>& u, const std::vector<Digit>& v, std::size_t g,
                               std::size_t h, std::size_t budget_bits, Stats* stats = nullptr);

/// A word of `word_bits` holds the product of two d-bit integers formed as
/// a + 2^-d u with d-bit parts: word_bits >= 4d.
bool fits_word(std::size_t word_bits, std::size_t d_bits);

}  // namespace fastmm::binseg
