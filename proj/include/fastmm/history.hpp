#pragma once

#include <string>
#include <vector>

namespace fastmm {

/// One recorded MM exponent bound. `exponent` keeps the published digits.
struct HistoryRow {
  std::string table;     // "1", "1a" or "2"
  std::string scope;     // "unrestricted" or "n<=1000000"
  std::string exponent;
  std::string citation;  // keys joined with ';'
  int year = 0;

  double value() const { return std::stod(exponent); }
  friend bool operator==(const HistoryRow&, const HistoryRow&) = default;
};

/// Embedded dataset, in publication order per table.
const std::vector<HistoryRow>& exponent_history();
/// The dataset as CSV with header `table,scope,exponent,citation,year`.
std::string history_csv();
/// Parses the CSV form; throws std::invalid_argument with a line number.
std::vector<HistoryRow> parse_history_csv(const std::string& text);

}  // namespace fastmm
