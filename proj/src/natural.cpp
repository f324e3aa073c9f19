#include "fastmm/natural.hpp"

#include <algorithm>
#include <stdexcept>

namespace fastmm {
namespace {

using Limb = UnboundedNatural::Limb;
using Limbs = std::vector<Limb>;

void trim(Limbs& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

// r[offset..] += a; r must be long enough to absorb the final carry.
void add_at(Limbs& r, const Limbs& a, std::size_t offset) {
  std::uint64_t carry = 0;
  std::size_t i = 0;
  for (; i < a.size(); ++i) {
    const std::uint64_t s = std::uint64_t(r[offset + i]) + a[i] + carry;
    r[offset + i] = static_cast<Limb>(s);
    carry = s >> 32;
  }
  for (std::size_t p = offset + i; carry; ++p) {
    if (p == r.size()) r.push_back(0);
    const std::uint64_t s = std::uint64_t(r[p]) + carry;
    r[p] = static_cast<Limb>(s);
    carry = s >> 32;
  }
}

// a -= b, requires a >= b.
void sub_in_place(Limbs& a, const Limbs& b) {
  std::int64_t borrow = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::int64_t d = std::int64_t(a[i]) - (i < b.size() ? std::int64_t(b[i]) : 0) - borrow;
    borrow = d < 0;
    if (d < 0) d += std::int64_t(1) << 32;
    a[i] = static_cast<Limb>(d);
    if (i >= b.size() && !borrow) break;
  }
  trim(a);
}

Limbs add(const Limbs& a, const Limbs& b) {
  Limbs r(std::max(a.size(), b.size()) + 1, 0);
  std::copy(a.begin(), a.end(), r.begin());
  add_at(r, b, 0);
  trim(r);
  return r;
}

Limbs schoolbook(const Limbs& a, const Limbs& b) {
  if (a.empty() || b.empty()) return {};
  Limbs r(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t carry = 0;
    const std::uint64_t ai = a[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::uint64_t t = ai * b[j] + r[i + j] + carry;
      r[i + j] = static_cast<Limb>(t);
      carry = t >> 32;
    }
    r[i + b.size()] = static_cast<Limb>(carry);
  }
  trim(r);
  return r;
}

Limbs slice(const Limbs& a, std::size_t lo, std::size_t hi) {
  lo = std::min(lo, a.size());
  hi = std::min(hi, a.size());
  Limbs r(a.begin() + static_cast<std::ptrdiff_t>(lo), a.begin() + static_cast<std::ptrdiff_t>(hi));
  trim(r);
  return r;
}

Limbs karatsuba(const Limbs& a, const Limbs& b, std::size_t threshold) {
  if (a.empty() || b.empty()) return {};
  if (std::min(a.size(), b.size()) < threshold) return schoolbook(a, b);
  const std::size_t half = std::max(a.size(), b.size()) / 2;
  const Limbs a0 = slice(a, 0, half), a1 = slice(a, half, a.size());
  const Limbs b0 = slice(b, 0, half), b1 = slice(b, half, b.size());
  Limbs r(a.size() + b.size() + 1, 0);
  if (a1.empty() || b1.empty()) {
    // Unbalanced operands: split only the longer one.
    const Limbs& shortv = a1.empty() ? a : b;
    const Limbs& lo = a1.empty() ? b0 : a0;
    const Limbs& hi = a1.empty() ? b1 : a1;
    add_at(r, karatsuba(shortv, lo, threshold), 0);
    add_at(r, karatsuba(shortv, hi, threshold), half);
  } else {
    const Limbs z0 = karatsuba(a0, b0, threshold);
    const Limbs z2 = karatsuba(a1, b1, threshold);
    Limbs z1 = karatsuba(add(a0, a1), add(b0, b1), threshold);
    sub_in_place(z1, z0);
    sub_in_place(z1, z2);
    add_at(r, z0, 0);
    add_at(r, z1, half);
    add_at(r, z2, 2 * half);
  }
  trim(r);
  return r;
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

UnboundedNatural::UnboundedNatural(std::uint64_t v) {
  if (v) limbs_.push_back(static_cast<Limb>(v));
  if (v >> 32) limbs_.push_back(static_cast<Limb>(v >> 32));
}

void UnboundedNatural::trim() { fastmm::trim(limbs_); }

UnboundedNatural UnboundedNatural::from_limbs(std::vector<Limb> limbs) {
  UnboundedNatural r;
  r.limbs_ = std::move(limbs);
  r.trim();
  return r;
}

UnboundedNatural UnboundedNatural::from_decimal(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty decimal string");
  UnboundedNatural r;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("bad decimal digit in '" + s + "'");
    // r = r*10 + digit
    std::uint64_t carry = static_cast<std::uint64_t>(c - '0');
    for (auto& l : r.limbs_) {
      const std::uint64_t t = std::uint64_t(l) * 10 + carry;
      l = static_cast<Limb>(t);
      carry = t >> 32;
    }
    if (carry) r.limbs_.push_back(static_cast<Limb>(carry));
  }
  r.trim();
  return r;
}

UnboundedNatural UnboundedNatural::from_hex(const std::string& s) {
  std::string body = s;
  if (body.rfind("0x", 0) == 0 || body.rfind("0X", 0) == 0) body = body.substr(2);
  if (body.empty()) throw std::invalid_argument("empty hex string");
  UnboundedNatural r;
  std::size_t bitpos = 0;
  for (auto it = body.rbegin(); it != body.rend(); ++it, bitpos += 4) {
    const int d = hex_digit(*it);
    if (d < 0) throw std::invalid_argument("bad hex digit in '" + s + "'");
    const std::size_t limb = bitpos / 32;
    if (r.limbs_.size() <= limb) r.limbs_.resize(limb + 1, 0);
    r.limbs_[limb] |= static_cast<Limb>(d) << (bitpos % 32);
  }
  r.trim();
  return r;
}

UnboundedNatural UnboundedNatural::power_of_two(std::size_t bits) {
  UnboundedNatural r;
  r.limbs_.assign(bits / 32 + 1, 0);
  r.limbs_.back() = Limb(1) << (bits % 32);
  return r;
}

std::size_t UnboundedNatural::bit_length() const {
  if (limbs_.empty()) return 0;
  const Limb top = limbs_.back();
  return (limbs_.size() - 1) * kLimbBits + (kLimbBits - static_cast<std::size_t>(__builtin_clz(top)));
}

bool UnboundedNatural::bit(std::size_t i) const {
  const std::size_t l = i / 32;
  return l < limbs_.size() && ((limbs_[l] >> (i % 32)) & 1u);
}

UnboundedNatural UnboundedNatural::extract_bits(std::size_t lo, std::size_t hi) const {
  if (hi < lo) throw std::invalid_argument("extract_bits: hi < lo");
  UnboundedNatural r = *this >> lo;
  const std::size_t width = hi - lo;
  const std::size_t keep = (width + 31) / 32;
  if (r.limbs_.size() > keep) r.limbs_.resize(keep);
  if (width % 32 && r.limbs_.size() == keep && keep > 0) r.limbs_.back() &= (Limb(1) << (width % 32)) - 1;
  r.trim();
  return r;
}

std::uint64_t UnboundedNatural::extract_word(std::size_t lo, std::size_t width) const {
  if (width > 64) throw std::invalid_argument("extract_word: width above 64");
  std::uint64_t out = 0;
  const std::size_t l = lo / 32, off = lo % 32;
  // Three limbs always cover 64 bits starting at any offset.
  for (std::size_t t = 0; t < 3; ++t) {
    const std::size_t idx = l + t;
    if (idx >= limbs_.size()) break;
    const std::uint64_t limb = limbs_[idx];
    const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(t * 32) - static_cast<std::ptrdiff_t>(off);
    if (shift >= 64) break;
    out |= shift >= 0 ? (limb << shift) : (limb >> -shift);
  }
  if (width < 64) out &= (std::uint64_t(1) << width) - 1;
  return out;
}

std::uint64_t UnboundedNatural::to_u64() const {
  if (limbs_.size() > 2) throw std::overflow_error("value does not fit in 64 bits");
  std::uint64_t v = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) v = (v << 32) | limbs_[i];
  return v;
}

std::string UnboundedNatural::to_decimal() const {
  if (limbs_.empty()) return "0";
  Limbs work = limbs_;
  std::string out;
  constexpr std::uint32_t kChunk = 1000000000u;
  while (!work.empty()) {
    std::uint64_t rem = 0;
    for (std::size_t i = work.size(); i-- > 0;) {
      const std::uint64_t cur = (rem << 32) | work[i];
      work[i] = static_cast<Limb>(cur / kChunk);
      rem = cur % kChunk;
    }
    fastmm::trim(work);
    for (int d = 0; d < 9; ++d) {
      out.push_back(static_cast<char>('0' + rem % 10));
      rem /= 10;
      if (work.empty() && rem == 0) break;
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string UnboundedNatural::to_hex() const {
  if (limbs_.empty()) return "0";
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < bit_length(); i += 4) out.push_back(digits[extract_word(i, 4)]);
  std::reverse(out.begin(), out.end());
  return out;
}

UnboundedNatural& UnboundedNatural::operator+=(const UnboundedNatural& o) {
  if (limbs_.size() < o.limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
  add_at(limbs_, o.limbs_, 0);
  return *this;
}

UnboundedNatural& UnboundedNatural::operator-=(const UnboundedNatural& o) {
  if (*this < o) throw std::domain_error("UnboundedNatural subtraction would go negative");
  sub_in_place(limbs_, o.limbs_);
  return *this;
}

UnboundedNatural& UnboundedNatural::operator<<=(std::size_t bits) {
  if (limbs_.empty() || bits == 0) return *this;
  const std::size_t whole = bits / 32, part = bits % 32;
  Limbs r(limbs_.size() + whole + 1, 0);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const std::uint64_t v = std::uint64_t(limbs_[i]) << part;
    r[i + whole] |= static_cast<Limb>(v);
    r[i + whole + 1] |= static_cast<Limb>(v >> 32);
  }
  limbs_ = std::move(r);
  trim();
  return *this;
}

UnboundedNatural& UnboundedNatural::operator>>=(std::size_t bits) {
  const std::size_t whole = bits / 32, part = bits % 32;
  if (whole >= limbs_.size()) {
    limbs_.clear();
    return *this;
  }
  Limbs r(limbs_.size() - whole, 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t v = limbs_[i + whole] >> part;
    if (part && i + whole + 1 < limbs_.size()) v |= std::uint64_t(limbs_[i + whole + 1]) << (32 - part);
    r[i] = static_cast<Limb>(v);
  }
  limbs_ = std::move(r);
  trim();
  return *this;
}

UnboundedNatural UnboundedNatural::mul_schoolbook(const UnboundedNatural& a, const UnboundedNatural& b) {
  return from_limbs(schoolbook(a.limbs_, b.limbs_));
}

UnboundedNatural UnboundedNatural::mul_karatsuba(const UnboundedNatural& a, const UnboundedNatural& b) {
  // Threshold 2 forces the recursion down to tiny operands.
  return from_limbs(karatsuba(a.limbs_, b.limbs_, 2));
}

UnboundedNatural operator*(const UnboundedNatural& a, const UnboundedNatural& b) {
  return UnboundedNatural::from_limbs(karatsuba(a.limbs_, b.limbs_, UnboundedNatural::kKaratsubaLimbs));
}

std::strong_ordering operator<=>(const UnboundedNatural& a, const UnboundedNatural& b) {
  if (a.limbs_.size() != b.limbs_.size()) return a.limbs_.size() <=> b.limbs_.size();
  for (std::size_t i = a.limbs_.size(); i-- > 0;)
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
  return std::strong_ordering::equal;
}

}  // namespace fastmm
