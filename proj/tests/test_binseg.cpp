#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fastmm/binseg.hpp"
#include "support.hpp"

using namespace fastmm;
using namespace fastmm::binseg;
using fastmm::testing::rng;

namespace {

std::vector<Digit> random_digits(std::size_t n, std::size_t bits) {
  std::vector<Digit> v(n);
  for (auto& x : v) x = bits >= 64 ? rng()() : rng()() & ((Digit(1) << bits) - 1);
  return v;
}

Digit loop_inner(const std::vector<Digit>& u, const std::vector<Digit>& v) {
  Digit s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

}  // namespace

TEST_CASE("encode examples") {
  CHECK(encode({0, 0, 0}, {4, 3}).is_zero());
  CHECK(encode({1, 2, 3}, {4, 3}) == UnboundedNatural(801));
  for (std::size_t k : {1, 7, 32, 33, 64}) {
    const Digit top = k == 64 ? ~Digit(0) : (Digit(1) << k) - 1;
    CHECK(encode(std::vector<Digit>(5, top), {k, 5}) == UnboundedNatural::power_of_two(5 * k) - UnboundedNatural(1));
  }
  CHECK_THROWS_AS(encode({16}, {4, 1}), std::out_of_range);
  CHECK_THROWS_AS(encode({1, 2}, {4, 3}), std::invalid_argument);
  CHECK_THROWS_AS(encode({1}, {0, 1}), std::invalid_argument);
}

TEST_CASE("decode examples and round trip") {
  CHECK(decode(UnboundedNatural(801), {4, 3}) == std::vector<Digit>{1, 2, 3});
  CHECK(decode(UnboundedNatural(), {5, 4}) == std::vector<Digit>(4, 0));
  CHECK_THROWS_AS(decode(UnboundedNatural(4096), {4, 3}), std::out_of_range);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t k = 1 + rng()() % 64, n = 1 + rng()() % 40;
    auto v = random_digits(n, k);
    CHECK(decode(encode(v, {k, n}), {k, n}) == v);
  }
}

TEST_CASE("inner product examples") {
  Stats st;
  CHECK(binseg::inner_product({1, 2, 3}, {4, 5, 6}, 3, 3, &st) == 32);
  CHECK(st.long_mults == 1);
  CHECK(st.radix_bits == 3 + 3 + 2);
  const std::vector<Digit> v{9, 4, 7, 1, 3};
  for (std::size_t j = 0; j < v.size(); ++j) {
    std::vector<Digit> e(v.size(), 0);
    e[j] = 1;
    CHECK(binseg::inner_product(e, v, 1, 4) == v[j]);
  }
  CHECK(binseg::inner_product({13}, {11}, 4, 4) == 143);
  CHECK_THROWS_AS(binseg::inner_product({8}, {1}, 3, 3), std::out_of_range);
  CHECK_THROWS_AS(binseg::inner_product({1, 2}, {1}, 3, 3), std::invalid_argument);
}

TEST_CASE("inner product matches the loop oracle") {
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 1 + rng()() % 1024, g = 1 + rng()() % 16, h = 1 + rng()() % 16;
    auto u = random_digits(n, g), v = random_digits(n, h);
    Stats st;
    CHECK(binseg::inner_product(u, v, g, h, &st) == loop_inner(u, v));
    CHECK(st.long_mults == 1);
    const std::size_t k = g + h + ceil_log2(n);
    // u(2^k) lies in [0, 2^{nk+g}), in fact below 2^{(n-1)k+g}.
    CHECK(st.lhs_bits <= (n - 1) * k + g);
    CHECK(st.lhs_bits <= n * k + g);
    CHECK(st.rhs_bits <= (n - 1) * k + h);
  }
}

TEST_CASE("sum examples and oracle") {
  CHECK(sum({5}, 3) == 5);
  for (std::size_t n : {1, 2, 3, 100, 1024}) CHECK(sum(std::vector<Digit>(n, 1), 1) == n);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 1 + rng()() % 1024, h = 1 + rng()() % 16;
    auto v = random_digits(n, h);
    Digit want = 0;
    for (auto x : v) want += x;
    Stats st;
    CHECK(sum(v, h, &st) == want);
    CHECK(st.long_mults == 1);
    CHECK(st.radix_bits == h + ceil_log2(n));
  }
}

TEST_CASE("guard bits make every convolution digit carry-free") {
  // Exhaustive over lengths n <= 8 and g, h <= 3 with extreme and random
  // entries: every coefficient of u(x) v_rev(x) is below 2^k.
  for (std::size_t n = 1; n <= 8; ++n)
    for (std::size_t g = 0; g <= 3; ++g)
      for (std::size_t h = 0; h <= 3; ++h) {
        const std::size_t k = std::max<std::size_t>(1, g + h + ceil_log2(n));
        const Digit umax = (Digit(1) << g) - 1, vmax = (Digit(1) << h) - 1;
        std::vector<std::vector<Digit>> us{std::vector<Digit>(n, umax)}, vs{std::vector<Digit>(n, vmax)};
        for (int r = 0; r < 8; ++r) {
          us.push_back(random_digits(n, g));
          vs.push_back(random_digits(n, h));
        }
        for (const auto& u : us)
          for (const auto& v : vs) {
            std::vector<Digit> rev(v.rbegin(), v.rend());
            for (Digit c : convolve_schoolbook(u, rev)) CHECK(c < (Digit(1) << k));
            CHECK(binseg::inner_product(u, v, g == 0 ? 1 : g, h == 0 ? 1 : h) == loop_inner(u, v));
          }
      }
}

TEST_CASE("exhaustive tiny inner products") {
  // n = 2, g = h = 2: all 4^4 combinations.
  for (Digit a = 0; a < 4; ++a)
    for (Digit b = 0; b < 4; ++b)
      for (Digit c = 0; c < 4; ++c)
        for (Digit d = 0; d < 4; ++d) CHECK(binseg::inner_product({a, b}, {c, d}, 2, 2) == a * c + b * d);
}

TEST_CASE("signed shift") {
  auto s = shift_signed({-3, 0, 4});
  CHECK(s.offset == -3);
  CHECK(s.values == std::vector<Digit>{0, 3, 7});
  auto id = shift_signed({0, 5, 2}, 0);
  CHECK(id.values == std::vector<Digit>{0, 5, 2});
  CHECK(signed_sum({-3, 0, 4}) == 1);
  CHECK_THROWS_AS(shift_signed({-5}, -4), std::out_of_range);
}

TEST_CASE("signed correction identities") {
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t n = 1 + rng()() % 200;
    std::vector<std::int64_t> v(n), w(n);
    const long span = 1 + static_cast<long>(rng()() % 30000);
    for (auto& x : v) x = fastmm::testing::rand_int(-span, span);
    for (auto& x : w) x = fastmm::testing::rand_int(-span, span / 2 + 1);
    Integer want_sum = 0, want_inner = 0;
    for (std::size_t i = 0; i < n; ++i) {
      want_sum += v[i];
      want_inner += Integer(v[i]) * Integer(w[i]);
    }
    Stats st;
    CHECK(signed_sum(v, &st) == want_sum);
    CHECK(signed_inner_product(v, w, &st) == want_inner);
    CHECK(st.long_mults == 2);
  }
}

TEST_CASE("polynomial multiplication") {
  CHECK(poly_mult({1, 1}, {1, 1}, 1) == std::vector<Digit>{1, 2, 1});
  CHECK(poly_mult({7}, {6}, 3) == std::vector<Digit>{42});
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t bound = 1 + rng()() % 20;
    auto p = random_digits(1 + rng()() % 8, bound), q = random_digits(1 + rng()() % 8, bound);
    Stats st;
    CHECK(poly_mult(p, q, bound, &st) == convolve_schoolbook(p, q));
    CHECK(st.long_mults == 1);
  }
  for (int rep = 0; rep < 20; ++rep) {
    auto p = random_digits(300, 16), q = random_digits(500, 16);
    CHECK(poly_mult(p, q, 16) == convolve_schoolbook(p, q));
  }
}

TEST_CASE("budgeted inner product splits into a power of two of pieces") {
  auto u = random_digits(1000, 10), v = random_digits(1000, 10);
  const Integer want(std::to_string(loop_inner(u, v)));
  Stats whole;
  CHECK(inner_product_budgeted(u, v, 10, 10, 1 << 20, &whole) == want);
  CHECK(whole.pieces == 1);
  CHECK(whole.long_mults == 1);
  Stats split;
  CHECK(inner_product_budgeted(u, v, 10, 10, 8000, &split) == want);
  CHECK(split.pieces > 1);
  CHECK((split.pieces & (split.pieces - 1)) == 0);
  CHECK(split.long_mults == split.pieces);
  CHECK(split.product_bits <= 8000);
  CHECK_THROWS_AS(inner_product_budgeted(u, v, 10, 10, 10, nullptr), std::invalid_argument);
}

TEST_CASE("word length predicate") {
  CHECK(fits_word(64, 16));
  CHECK_FALSE(fits_word(64, 17));
  CHECK(fits_word(32, 8));
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(5) == 3);
  CHECK(ceil_log2(1024) == 10);
}
