#include "fastmm/binseg.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fastmm::binseg {
namespace {

void check_radix(std::size_t k) {
  if (k == 0 || k > 64)
    throw std::invalid_argument("radix bits must lie in 1..64 (got " + std::to_string(k) + ")");
}

bool below_pow2(Digit x, std::size_t bits) { return bits >= 64 || x < (Digit(1) << bits); }

void check_range(const std::vector<Digit>& v, std::size_t bits, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!below_pow2(v[i], bits))
      throw std::out_of_range(std::string(what) + "[" + std::to_string(i) + "] = " + std::to_string(v[i]) +
                              " is not below 2^" + std::to_string(bits));
}

UnboundedNatural long_multiply(const UnboundedNatural& x, const UnboundedNatural& y, std::size_t k, Stats* stats) {
  UnboundedNatural p = x * y;
  if (stats) {
    stats->long_mults += 1;
    stats->radix_bits = k;
    stats->lhs_bits = x.bit_length();
    stats->rhs_bits = y.bit_length();
    stats->product_bits = p.bit_length();
  }
  return p;
}

// Digit n-1 of u(2^k)·v_rev(2^k); the caller guarantees Σ u_i v_i < 2^k.
Digit segmented_inner(const std::vector<Digit>& u, const std::vector<Digit>& v, std::size_t k, Stats* stats) {
  const std::size_t n = u.size();
  std::vector<Digit> rev(v.rbegin(), v.rend());
  const SegmentCodec codec{k, n};
  const UnboundedNatural p = long_multiply(encode(u, codec), encode(rev, codec), k, stats);
  return p.extract_word((n - 1) * k, k);
}

}  // namespace

std::size_t ceil_log2(std::size_t n) {
  if (n == 0) throw std::invalid_argument("ceil_log2(0)");
  std::size_t b = 0;
  while ((std::size_t(1) << b) < n) ++b;
  return b;
}

UnboundedNatural encode(const std::vector<Digit>& v, const SegmentCodec& codec) {
  check_radix(codec.radix_bits);
  if (v.size() != codec.length)
    throw std::invalid_argument("encode: vector length " + std::to_string(v.size()) + " differs from codec length " +
                                std::to_string(codec.length));
  check_range(v, codec.radix_bits, "v");
  const std::size_t k = codec.radix_bits;
  std::vector<UnboundedNatural::Limb> limbs((v.size() * k + 31) / 32 + 2, 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t pos = i * k, l = pos / 32, off = pos % 32;
    const unsigned __int128 x = static_cast<unsigned __int128>(v[i]) << off;
    limbs[l] |= static_cast<std::uint32_t>(x);
    limbs[l + 1] |= static_cast<std::uint32_t>(x >> 32);
    limbs[l + 2] |= static_cast<std::uint32_t>(x >> 64);
  }
  return UnboundedNatural::from_limbs(std::move(limbs));
}

std::vector<Digit> decode(const UnboundedNatural& N, const SegmentCodec& codec) {
  check_radix(codec.radix_bits);
  const std::size_t k = codec.radix_bits;
  if (N.bit_length() > k * codec.length)
    throw std::out_of_range("decode: value has " + std::to_string(N.bit_length()) + " bits, codec holds " +
                            std::to_string(k * codec.length));
  std::vector<Digit> out(codec.length);
  for (std::size_t i = 0; i < codec.length; ++i) out[i] = N.extract_word(i * k, k);
  return out;
}

Digit inner_product(const std::vector<Digit>& u, const std::vector<Digit>& v, std::size_t g, std::size_t h,
                    Stats* stats) {
  if (u.empty() || u.size() != v.size()) throw std::invalid_argument("inner_product: vectors must be nonempty and of equal length");
  check_range(u, g, "u");
  check_range(v, h, "v");
  const std::size_t k = std::max<std::size_t>(1, g + h + ceil_log2(u.size()));
  check_radix(k);
  return segmented_inner(u, v, k, stats);
}

Digit sum(const std::vector<Digit>& v, std::size_t h, Stats* stats) {
  if (v.empty()) throw std::invalid_argument("sum: empty vector");
  check_range(v, h, "v");
  const std::size_t k = std::max<std::size_t>(1, h + ceil_log2(v.size()));
  check_radix(k);
  return segmented_inner(std::vector<Digit>(v.size(), 1), v, k, stats);
}

std::vector<Digit> poly_mult(const std::vector<Digit>& p, const std::vector<Digit>& q, std::size_t bound, Stats* stats) {
  if (p.empty() || q.empty()) throw std::invalid_argument("poly_mult: empty coefficient vector");
  check_range(p, bound, "p");
  check_range(q, bound, "q");
  const std::size_t k = std::max<std::size_t>(1, 2 * bound + ceil_log2(std::min(p.size(), q.size())));
  check_radix(k);
  const UnboundedNatural prod =
      long_multiply(encode(p, {k, p.size()}), encode(q, {k, q.size()}), k, stats);
  return decode(prod, {k, p.size() + q.size() - 1});
}

std::vector<Digit> convolve_schoolbook(const std::vector<Digit>& p, const std::vector<Digit>& q) {
  if (p.empty() || q.empty()) return {};
  std::vector<Digit> out(p.size() + q.size() - 1, 0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  return out;
}

Shifted shift_signed(const std::vector<std::int64_t>& v) {
  if (v.empty()) return {};
  return shift_signed(v, *std::min_element(v.begin(), v.end()));
}

Shifted shift_signed(const std::vector<std::int64_t>& v, std::int64_t q) {
  Shifted s;
  s.offset = q;
  s.values.reserve(v.size());
  for (auto x : v) {
    if (x < q) throw std::out_of_range("shift_signed: entry " + std::to_string(x) + " below offset " + std::to_string(q));
    s.values.push_back(static_cast<Digit>(static_cast<unsigned __int128>(static_cast<__int128>(x) - q)));
  }
  return s;
}

namespace {
std::size_t bits_needed(const std::vector<Digit>& v) {
  Digit mx = 0;
  for (auto x : v) mx = std::max(mx, x);
  std::size_t b = 0;
  while (b < 64 && (mx >> b) != 0) ++b;
  return b;
}
Integer to_integer(std::int64_t x) { return Integer(std::to_string(x)); }
Integer to_integer(Digit x) { return Integer(std::to_string(x)); }
}  // namespace

Integer signed_sum(const std::vector<std::int64_t>& v, Stats* stats) {
  if (v.empty()) return Integer(0);
  const Shifted s = shift_signed(v);
  Integer total = to_integer(sum(s.values, bits_needed(s.values), stats));
  total += to_integer(s.offset) * Integer(static_cast<unsigned long>(v.size()));
  return total;
}

Integer signed_inner_product(const std::vector<std::int64_t>& v, const std::vector<std::int64_t>& w, Stats* stats) {
  if (v.size() != w.size()) throw std::invalid_argument("signed_inner_product: length mismatch");
  if (v.empty()) return Integer(0);
  const Shifted su = shift_signed(v), sw = shift_signed(w);
  const Integer n(static_cast<unsigned long>(v.size()));
  const Integer q = to_integer(su.offset), qp = to_integer(sw.offset);
  Integer sum_u = 0, sum_up = 0;
  for (auto x : su.values) sum_u += to_integer(x);
  for (auto x : sw.values) sum_up += to_integer(x);
  Integer total = to_integer(inner_product(su.values, sw.values, bits_needed(su.values), bits_needed(sw.values), stats));
  total += qp * sum_u;
  total += q * sum_up;
  total += n * q * qp;
  return total;
}

Integer inner_product_budgeted(const std::vector<Digit>& u, const std::vector<Digit>& v, std::size_t g, std::size_t h,
                               std::size_t budget_bits, Stats* stats) {
  if (u.empty() || u.size() != v.size()) throw std::invalid_argument("inner_product_budgeted: bad lengths");
  const std::size_t n = u.size();
  auto cost = [&](std::size_t len) { return 2 * len * std::max<std::size_t>(1, g + h + ceil_log2(len)); };
  std::size_t pieces = 1;
  while (cost((n + pieces - 1) / pieces) > budget_bits) {
    if (pieces >= n)
      throw std::invalid_argument("inner_product_budgeted: budget of " + std::to_string(budget_bits) +
                                  " bits is below a single-entry product");
    pieces *= 2;
  }
  const std::size_t len = (n + pieces - 1) / pieces;
  Integer total = 0;
  std::size_t used = 0, mults = 0;
  for (std::size_t lo = 0; lo < n; lo += len, ++used) {
    const std::size_t hi = std::min(n, lo + len);
    Stats local;
    const std::vector<Digit> su(u.begin() + static_cast<std::ptrdiff_t>(lo), u.begin() + static_cast<std::ptrdiff_t>(hi));
    const std::vector<Digit> sv(v.begin() + static_cast<std::ptrdiff_t>(lo), v.begin() + static_cast<std::ptrdiff_t>(hi));
    total += to_integer(inner_product(su, sv, g, h, &local));
    mults += local.long_mults;
    if (stats) {
      stats->radix_bits = std::max(stats->radix_bits, local.radix_bits);
      stats->lhs_bits = std::max(stats->lhs_bits, local.lhs_bits);
      stats->rhs_bits = std::max(stats->rhs_bits, local.rhs_bits);
      stats->product_bits = std::max(stats->product_bits, local.product_bits);
    }
  }
  if (stats) {
    stats->long_mults += mults;
    stats->pieces = used;
  }
  return total;
}

bool fits_word(std::size_t word_bits, std::size_t d_bits) { return word_bits >= 4 * d_bits; }

}  // namespace fastmm::binseg
