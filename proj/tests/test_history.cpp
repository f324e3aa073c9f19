#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fastmm/apa.hpp"
#include "fastmm/bilinear.hpp"
#include "fastmm/history.hpp"
#include "fastmm/serialize.hpp"

#include <cmath>

using namespace fastmm;

namespace {
std::vector<std::string> column(const std::string& table, std::string HistoryRow::*field) {
  std::vector<std::string> out;
  for (const auto& r : exponent_history())
    if (r.table == table) out.push_back(r.*field);
  return out;
}
}  // namespace

TEST_CASE("embedded dataset matches the shipped CSV") {
  const auto rows = parse_history_csv(read_text_file(FASTMM_DATA_DIR "/exponent_history.csv"));
  CHECK(rows == exponent_history());
  CHECK(parse_history_csv(history_csv()) == exponent_history());
}

TEST_CASE("table 1 values verbatim") {
  CHECK(column("1", &HistoryRow::exponent) ==
        std::vector<std::string>{"2.8074", "2.7962", "2.7801", "2.7799", "2.548", "2.522", "2.517", "2.496", "2.479",
                                 "2.376", "2.374", "2.373"});
  CHECK(column("1", &HistoryRow::citation) ==
        std::vector<std::string>{"S69", "P78", "P80", "BCLR79;B80", "S81", "P81", "R82", "CW82", "S86", "CW90",
                                 "S10;DS13", "VW14;LG14"});
}

TEST_CASE("table 1a and table 2 values verbatim") {
  CHECK(column("1a", &HistoryRow::exponent) ==
        std::vector<std::string>{"2.3754770", "2.3736898", "2.3729269", "2.3728639"});
  CHECK(column("2", &HistoryRow::exponent) ==
        std::vector<std::string>{"2.8074", "2.7962", "2.7801", "2.7762", "2.7734"});
  CHECK(column("2", &HistoryRow::citation) == std::vector<std::string>{"S69", "P78", "P80", "P81", "P82"});
  for (const auto& r : exponent_history()) CHECK(r.scope == (r.table == "2" ? "n<=1000000" : "unrestricted"));
}

TEST_CASE("exponents never increase within a table") {
  for (const std::string t : {"1", "1a", "2"}) {
    double prev = 3.0;
    int year = 0;
    for (const auto& r : exponent_history()) {
      if (r.table != t) continue;
      CHECK(r.value() < prev);
      CHECK(r.year >= year);
      prev = r.value();
      year = r.year;
    }
  }
}

TEST_CASE("csv parse errors") {
  CHECK_THROWS_AS(parse_history_csv("bad header\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_history_csv("table,scope,exponent,citation,year\n1,x,2.1,A\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_history_csv("table,scope,exponent,citation,year\n1,x,abc,A,1990\n"), std::invalid_argument);
}

TEST_CASE("exponent arithmetic") {
  CHECK(std::fabs(exponent_from_rank(2, 2, 2, 7) - 2.80735) < 5e-5);
  // Rank 143640 for MM(70).
  const double e70 = exponent_from_rank(70, 70, 70, 143640);
  CHECK(e70 < 2.7962);
  CHECK(std::fabs(e70 - 2.7951227) < 5e-7);
  const double e49 = apa_exponent(7, 1, 7);
  CHECK(e49 < 2.66);
  CHECK(std::fabs(e49 - 2.6594143) < 5e-7);
  CHECK(exponent_from_rank(34, 34, 34, 0.5 * 34 * 34 * 34 + 3 * 34 * 34) < 2.85);
}
