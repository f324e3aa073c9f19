#include "fastmm/history.hpp"

#include <sstream>
#include <stdexcept>

namespace fastmm {

const std::vector<HistoryRow>& exponent_history() {
  // Kept in sync with data/exponent_history.csv (checked by the tests).
  static const std::vector<HistoryRow> rows{
    {"1", "unrestricted", "2.8074", "S69", 1969},
    {"1", "unrestricted", "2.7962", "P78", 1978},
    {"1", "unrestricted", "2.7801", "P80", 1979},
    {"1", "unrestricted", "2.7799", "BCLR79;B80", 1979},
    {"1", "unrestricted", "2.548", "S81", 1979},
    {"1", "unrestricted", "2.522", "P81", 1979},
    {"1", "unrestricted", "2.517", "R82", 1980},
    {"1", "unrestricted", "2.496", "CW82", 1981},
    {"1", "unrestricted", "2.479", "S86", 1986},
    {"1", "unrestricted", "2.376", "CW90", 1986},
    {"1", "unrestricted", "2.374", "S10;DS13", 2010},
    {"1", "unrestricted", "2.373", "VW14;LG14", 2012},
    {"1a", "unrestricted", "2.3754770", "CW90", 1986},
    {"1a", "unrestricted", "2.3736898", "S10;DS13", 2010},
    {"1a", "unrestricted", "2.3729269", "VW14", 2012},
    {"1a", "unrestricted", "2.3728639", "LG14", 2014},
    {"2", "n<=1000000", "2.8074", "S69", 1969},
    {"2", "n<=1000000", "2.7962", "P78", 1978},
    {"2", "n<=1000000", "2.7801", "P80", 1979},
    {"2", "n<=1000000", "2.7762", "P81", 1981},
    {"2", "n<=1000000", "2.7734", "P82", 1982},
  };
  return rows;
}

std::string history_csv() {
  std::ostringstream os;
  os << "table,scope,exponent,citation,year\n";
  for (const auto& r : exponent_history())
    os << r.table << ',' << r.scope << ',' << r.exponent << ',' << r.citation << ',' << r.year << '\n';
  return os.str();
}

std::vector<HistoryRow> parse_history_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<HistoryRow> out;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != "table,scope,exponent,citation,year")
        throw std::invalid_argument("history csv line 1: unexpected header '" + line + "'");
      continue;
    }
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 5) throw std::invalid_argument("history csv line " + std::to_string(lineno) + ": expected 5 fields");
    HistoryRow r{f[0], f[1], f[2], f[3], 0};
    try {
      std::size_t used = 0;
      r.year = std::stoi(f[4], &used);
      if (used != f[4].size()) throw std::invalid_argument("trailing");
      (void)r.value();
    } catch (const std::exception&) {
      throw std::invalid_argument("history csv line " + std::to_string(lineno) + ": bad number");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fastmm
