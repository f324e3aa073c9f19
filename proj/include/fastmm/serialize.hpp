#pragma once

#include "fastmm/apa.hpp"
#include "fastmm/bilinear.hpp"

#include <stdexcept>
#include <string>

namespace fastmm {

// Line-oriented text format. Blank lines and lines starting with '#' are
// ignored. Coefficients are exact rationals written p or p/q. Only nonzero
// coefficients are listed.
//
//   bilinear                      trilinear                  apa
//   name <text>                   name <text>                name <text>
//   shape m k n                   problem m k n  (1+ lines)  problem m k n  (1+)
//     | dims da db dc             aggregates N               scale s
//       target α β γ c  (0+)      rank r                     degree d
//   rank r                        A q idx:c idx:c ...        border_rank r
//   U q α c                       B q ...                    U q α c0 c1 ... cd
//   V q β c                       D q ...                    V q β c0 ...
//   W q γ c    (output γ)         end                        W q γ c0 ...  (D index γ)
//   S{A,B,W} inputs N                                        end
//   S{A,B,W} step lhs +|- rhs
//   S{A,B,W} out i1 i2 ...
//   end
//
// A trilinear decomposition with no `problem` line uses `dims` and `target`
// lines as in the bilinear case.

class ParseError : public std::invalid_argument {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : std::invalid_argument("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::string write_bilinear(const BilinearAlgorithm& alg);
BilinearAlgorithm read_bilinear(const std::string& text);

std::string write_trilinear(const TrilinearDecomposition& dec);
TrilinearDecomposition read_trilinear(const std::string& text);

std::string write_apa(const APAAlgorithm& alg);
APAAlgorithm read_apa(const std::string& text);

/// First keyword of the text: "bilinear", "trilinear" or "apa".
std::string detect_format(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace fastmm
