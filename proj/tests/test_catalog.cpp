#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fastmm/catalog.hpp"
#include "support.hpp"

using namespace fastmm;
using namespace fastmm::testing;

TEST_CASE("Strassen's seven products as listed") {
  auto s = catalog::strassen();
  CHECK(s.rank() == 7);
  CHECK(s.verified);
  CHECK(s.coefficients_in_integers());
  // p1 = (a11 + a22)(b11 + b22)
  CHECK(row_form(s.U, 0) == SparseForm{{0, 1}, {3, 1}});
  CHECK(row_form(s.V, 0) == SparseForm{{0, 1}, {3, 1}});
  // c22 = p1 + p3 + p4 - p2
  CHECK(row_form(s.W, 3) == SparseForm{{0, 1}, {1, -1}, {2, 1}, {3, 1}});
}

TEST_CASE("Strassen on concrete 2x2 matrices") {
  auto s = catalog::strassen();
  OpCounter ctr;
  auto c = apply_scalar(s, Matrix<Integer>{{1, 2}, {3, 4}}, Matrix<Integer>{{5, 6}, {7, 8}}, ctr);
  CHECK(c == Matrix<Integer>{{19, 22}, {43, 50}});
}

TEST_CASE("Winograd variant: 7 multiplications and 15 additions") {
  auto w = catalog::winograd_mm2();
  REQUIRE(w.schedule);
  CHECK(w.schedule->a_forms.steps.size() + w.schedule->b_forms.steps.size() + w.schedule->combine.steps.size() == 15);
  for (int rep = 0; rep < 100; ++rep) {
    auto a = rand_matrix<Integer>(2, 2), b = rand_matrix<Integer>(2, 2);
    OpCounter ctr;
    CHECK(apply_scalar(w, a, b, ctr) == reference_product(a, b));
    CHECK(ctr.mults == 7);
    CHECK(ctr.adds == 15);
  }
}

TEST_CASE("Winograd coefficient matrices agree with its schedule") {
  auto w = catalog::winograd_mm2();
  CHECK(w.U == w.schedule->a_forms.coefficients());
  CHECK(w.V == w.schedule->b_forms.coefficients());
  CHECK(w.W == w.schedule->combine.coefficients());
  // Without the schedule the same coefficients cost more additions.
  auto plain = w;
  plain.schedule.reset();
  OpCounter ctr;
  apply_scalar(plain, rand_matrix<Integer>(2, 2), rand_matrix<Integer>(2, 2), ctr);
  CHECK(ctr.mults == 7);
  CHECK(ctr.adds > 15);
}

TEST_CASE("Winograd recursion: 7^p mults and 5(7^p - 4^p) adds at cutoff 1") {
  auto w = catalog::winograd_mm2();
  std::uint64_t p7 = 1, p4 = 1;
  for (std::size_t p = 1; p <= 5; ++p) {
    p7 *= 7;
    p4 *= 4;
    const std::size_t n = std::size_t(1) << p;
    auto a = rand_matrix<Integer>(n, n), b = rand_matrix<Integer>(n, n);
    OpCounter ctr;
    CHECK(apply_recursive(w, a, b, 1, ctr) == reference_product(a, b));
    CHECK(ctr.mults == p7);
    CHECK(ctr.adds == 5 * (p7 - p4));
  }
}

TEST_CASE("complex multiplication with three real products") {
  auto cm = catalog::complex_mult();
  CHECK(cm.rank() == 3);
  for (int rep = 0; rep < 100; ++rep) {
    const long a0 = rand_int(-99, 99), a1 = rand_int(-99, 99), b0 = rand_int(-99, 99), b1 = rand_int(-99, 99);
    OpCounter ctr;
    auto c = apply_vector<Integer>(cm, {Integer(a0), Integer(a1)}, {Integer(b0), Integer(b1)}, ctr);
    CHECK(c[0] == a0 * b0 - a1 * b1);
    CHECK(c[1] == a0 * b1 + a1 * b0);
    CHECK(ctr.mults == 3);
  }
}

TEST_CASE("straightforward algorithms for small shapes") {
  for (std::size_t m = 1; m <= 3; ++m)
    for (std::size_t k = 1; k <= 3; ++k)
      for (std::size_t n = 1; n <= 3; ++n) {
        auto alg = catalog::straightforward(m, k, n);
        CHECK(alg.rank() == m * k * n);
        CHECK(alg.verified);
      }
  CHECK_THROWS_AS(catalog::straightforward(0, 1, 1), DimensionError);
}

TEST_CASE("lookup by name") {
  CHECK(catalog::by_name("strassen").name == "strassen");
  CHECK(catalog::by_name("winograd").rank() == 7);
  CHECK(catalog::by_name("straightforward:2,3,4").rank() == 24);
  CHECK_THROWS_AS(catalog::by_name("nope"), std::invalid_argument);
  CHECK_THROWS_AS(catalog::by_name("straightforward:2,3"), std::invalid_argument);
  CHECK(catalog::names().size() == 4);
}

TEST_CASE("property: every catalog entry rejects random perturbations") {
  for (const auto& alg : {catalog::strassen(), catalog::winograd_mm2(), catalog::complex_mult(),
                          catalog::straightforward(2, 3, 2)})
    for (int rep = 0; rep < 50; ++rep) CHECK_FALSE(verify(mutate(alg)));
}
