#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fastmm/aggregation.hpp"
#include "fastmm/catalog.hpp"
#include "fastmm/serialize.hpp"
#include "support.hpp"

using namespace fastmm;
using namespace fastmm::testing;

namespace {

template <class F>
std::size_t error_line(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("bilinear round trip is bit-exact") {
  std::vector<BilinearAlgorithm> algs{catalog::strassen(), catalog::winograd_mm2(), catalog::complex_mult(),
                                      catalog::straightforward(2, 3, 1)};
  for (const auto& d : transpose_duals(catalog::strassen())) algs.push_back(d);
  for (const auto& d : bilinear_from_trilinear(aggregate_two(2, 1, 3), Role::D)) algs.push_back(d);
  for (const auto& alg : algs) {
    const std::string text = write_bilinear(alg);
    auto back = read_bilinear(text);
    CHECK(back == alg);
    CHECK(back.name == alg.name);
    CHECK(back.schedule == alg.schedule);
    CHECK(write_bilinear(back) == text);
    CHECK(verify(back));
  }
}

TEST_CASE("rational coefficients survive the round trip") {
  auto s = catalog::strassen();
  s.U(0, 0) = make_rational(-3, 7);
  s.W(1, 2) = make_rational(5, 2);
  auto back = read_bilinear(write_bilinear(s));
  CHECK(back.U(0, 0) == make_rational(-3, 7));
  CHECK(back.W(1, 2) == make_rational(5, 2));
  CHECK(write_bilinear(s).find("U 0 0 -3/7") != std::string::npos);
}

TEST_CASE("trilinear round trip") {
  for (const auto& dec : {aggregate_two(2, 2, 2), aggregate_three(2), trilinear_from_bilinear(catalog::complex_mult()),
                          trilinear_from_bilinear(catalog::winograd_mm2())}) {
    const std::string text = write_trilinear(dec);
    auto back = read_trilinear(text);
    CHECK(back.terms == dec.terms);
    CHECK(back.layout == dec.layout);
    CHECK(back.target == dec.target);
    CHECK(back.aggregate_terms == dec.aggregate_terms);
    CHECK(write_trilinear(back) == text);
  }
}

TEST_CASE("APA round trip") {
  auto alg = apa_aggregate(2, 1, 3);
  const std::string text = write_apa(alg);
  auto back = read_apa(text);
  CHECK(back.U == alg.U);
  CHECK(back.V == alg.V);
  CHECK(back.W == alg.W);
  CHECK(back.scale == -2);
  CHECK(back.degree == 2);
  CHECK(write_apa(back) == text);
  CHECK(apa_symbolic_check(back));
}

TEST_CASE("format detection") {
  CHECK(detect_format("# comment\n\nbilinear\n") == "bilinear");
  CHECK(detect_format(write_trilinear(aggregate_two(1, 1, 1))) == "trilinear");
  CHECK(detect_format(write_apa(apa_aggregate(1, 1, 1))) == "apa");
  CHECK_THROWS_AS(detect_format("matrix\n"), ParseError);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(error_line([] { read_bilinear("bilinear\nshape 2 2 2\nrank 7\nU 0 0 x\nend\n"); }) == 4);
  CHECK(error_line([] { read_bilinear("bilinear\nshape 2 2 2\nrank 7\nU 9 0 1\nend\n"); }) == 4);
  CHECK(error_line([] { read_bilinear("bilinear\nshape 2 2\nrank 7\nend\n"); }) == 2);
  CHECK(error_line([] { read_bilinear("bilinear\nshape 2 2 2\n\nfoo 1\nend\n"); }) == 4);
  CHECK(error_line([] { read_bilinear("bilinear\nshape 2 2 2\nU 0 0 1\nend\n"); }) == 4);
  CHECK(error_line([] { read_bilinear("bilinear\nshape 2 2 2\nrank 1\n"); }) == 3);
  CHECK(error_line([] { read_bilinear("bilinear\nshape 2 2 2\nrank 1\nV 0 0 1/0\nend\n"); }) == 4);
  CHECK(error_line([] { read_bilinear("trilinear\n"); }) == 1);
  CHECK(error_line([] { read_trilinear("trilinear\nproblem 1 1 1\nrank 1\nA 0 0:1\nA 0 0:1\nend\n"); }) == 5);
  CHECK(error_line([] { read_trilinear("trilinear\nproblem 1 1 1\nrank 1\nB 0 3:1\nend\n"); }) == 4);
  CHECK(error_line([] { read_apa("apa\nproblem 1 1 1\nborder_rank 1\nU 0 0 1 q\nend\n"); }) == 4);
  CHECK(error_line([] { read_bilinear("bilinear\nshape 1 1 1\nrank 1\nSA step 0 + 1\nend\n"); }) == 4);
}

TEST_CASE("a file with one flipped sign parses but fails verification") {
  std::string text = write_bilinear(catalog::strassen());
  const auto pos = text.find("W 6 0 1");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 7, "W 6 0 -1");
  auto alg = read_bilinear(text);
  auto res = verify(alg);
  CHECK_FALSE(res);
  CHECK(res.violated.has_value());
}

TEST_CASE("file helpers") {
  const std::string path = "serialize_test_tmp.txt";
  write_text_file(path, "bilinear\n");
  CHECK(read_text_file(path) == "bilinear\n");
  std::remove(path.c_str());
  CHECK_THROWS(read_text_file("/nonexistent/dir/file"));
}
