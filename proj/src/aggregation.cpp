#include "fastmm/aggregation.hpp"

#include "fastmm/catalog.hpp"

#include <array>

namespace fastmm {
namespace {

// Generating table with up to three rows. Cell (row r, column c) holds a
// variable of side c whose index pair is kPairs[(r + c) % 3]:
//   row 0: a_ij  b_jh  d_hi
//   row 1: u_jh  v_hi  w_ij
//   row 2: x_hi  y_ij  z_jh
// Pair 0 = (i,j), pair 1 = (j,h), pair 2 = (h,i).
class GeneratingTable {
 public:
  GeneratingTable(std::size_t rows, std::size_t m, std::size_t k, std::size_t n)
      : rows_(rows), m_(m), k_(k), n_(n) {
    const MMShape s{m, k, n};
    layout_.problems.push_back(s);
    if (rows >= 2) layout_.problems.push_back(s.rotated());
    if (rows >= 3) layout_.problems.push_back(s.rotated().rotated());
  }

  const DisjointMMTarget& layout() const { return layout_; }
  std::size_t rows() const { return rows_; }

  std::uint32_t cell(std::size_t r, std::size_t c, std::size_t i, std::size_t j, std::size_t h) const {
    const std::size_t pair = (r + c) % 3;
    std::size_t local = 0;
    switch (pair) {
      case 0: local = i * k_ + j; break;
      case 1: local = j * n_ + h; break;
      default: local = h * m_ + i; break;
    }
    return static_cast<std::uint32_t>(offset(r, c) + local);
  }

  std::size_t offset(std::size_t r, std::size_t c) const {
    switch (c) {
      case 0: return layout_.a_offset(r);
      case 1: return layout_.b_offset(r);
      default: return layout_.d_offset(r);
    }
  }

  /// Range of the index that is not part of the pair, and the pair sizes.
  std::size_t free_range(std::size_t pair) const { return pair == 0 ? n_ : pair == 1 ? m_ : k_; }
  std::array<std::size_t, 2> pair_ranges(std::size_t pair) const {
    return pair == 0 ? std::array<std::size_t, 2>{m_, k_}
         : pair == 1 ? std::array<std::size_t, 2>{k_, n_}
                     : std::array<std::size_t, 2>{n_, m_};
  }

  /// (i, j, h) from a pair value (p, q) and the free index f.
  static std::array<std::size_t, 3> ijh(std::size_t pair, std::size_t p, std::size_t q, std::size_t f) {
    switch (pair) {
      case 0: return {p, q, f};
      case 1: return {f, p, q};
      default: return {q, f, p};
    }
  }

 private:
  std::size_t rows_, m_, k_, n_;
  DisjointMMTarget layout_;
};

std::vector<TrilinearTerm> aggregates(const GeneratingTable& g, std::size_t m, std::size_t k, std::size_t n) {
  std::vector<TrilinearTerm> out;
  out.reserve(m * k * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t h = 0; h < n; ++h) {
        TrilinearTerm t;
        for (std::size_t r = 0; r < g.rows(); ++r) {
          t.a.add(g.cell(r, 0, i, j, h), 1);
          t.b.add(g.cell(r, 1, i, j, h), 1);
          t.d.add(g.cell(r, 2, i, j, h), 1);
        }
        out.push_back(std::move(t));
      }
  return out;
}

SparseForm& side(TrilinearTerm& t, std::size_t c) { return c == 0 ? t.a : c == 1 ? t.b : t.d; }

// Corrections for the aggregate cross products in which at least two
// columns carry the same index pair. For a fixed pair and pair value the
// pivot of column c is the cell of that pair; F_c sums column c's other
// cells over the free index.
//   two rows:   one pivot-less column c3       -> E_c1 E_c2 F_c3
//   three rows: N E0E1E2 + E0E1F2 + E0F1E2 + F0E1E2
//               = E0 E1 (F2 + N E2) + E0 F1 E2 + F0 E1 E2
std::vector<TrilinearTerm> pair_corrections(const GeneratingTable& g) {
  std::vector<TrilinearTerm> out;
  for (std::size_t pair = 0; pair < 3; ++pair) {
    std::array<std::ptrdiff_t, 3> pivot_row{};
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t r = (pair + 3 - c) % 3;
      pivot_row[c] = r < g.rows() ? static_cast<std::ptrdiff_t>(r) : -1;
    }
    const auto ranges = g.pair_ranges(pair);
    const std::size_t nfree = g.free_range(pair);
    for (std::size_t p = 0; p < ranges[0]; ++p)
      for (std::size_t q = 0; q < ranges[1]; ++q) {
        std::array<SparseForm, 3> pivot, rest;
        for (std::size_t c = 0; c < 3; ++c) {
          for (std::size_t f = 0; f < nfree; ++f) {
            const auto [i, j, h] = GeneratingTable::ijh(pair, p, q, f);
            for (std::size_t r = 0; r < g.rows(); ++r) {
              if (static_cast<std::ptrdiff_t>(r) == pivot_row[c]) {
                if (f == 0) pivot[c].add(g.cell(r, c, i, j, h), 1);
              } else {
                rest[c].add(g.cell(r, c, i, j, h), 1);
              }
            }
          }
        }
        if (g.rows() == 2) {
          TrilinearTerm t;
          for (std::size_t c = 0; c < 3; ++c) side(t, c) = pivot_row[c] >= 0 ? pivot[c] : rest[c];
          t.a = t.a.scaled(-1);
          out.push_back(std::move(t));
        } else {
          SparseForm last = rest[2];
          for (const auto& [idx, c] : pivot[2].entries()) last.add(idx, Rational(static_cast<long>(nfree)) * c);
          out.push_back(TrilinearTerm{pivot[0].scaled(-1), pivot[1], last});
          out.push_back(TrilinearTerm{pivot[0].scaled(-1), rest[1], pivot[2]});
          out.push_back(TrilinearTerm{rest[0].scaled(-1), pivot[1], pivot[2]});
        }
      }
  }
  return out;
}

// The three-row table also produces the cross products whose three cells
// carry three different pairs in the non-cyclic order: a v z, u y d, x b w.
// Each is itself a trace form of one matrix product and is cancelled with a
// verified bilinear algorithm for that shape.
std::vector<TrilinearTerm> cross_corrections(const GeneratingTable& g, std::size_t m, std::size_t k,
                                             std::size_t n) {
  struct Cross {
    MMShape shape;
    std::size_t a_row, b_row, d_row;  // table rows feeding columns 0, 1, 2
  };
  // For a trace decomposition (x, y, z) of MM(s): x spans column 0's cell,
  // z (the D-form of the dual) lands in column 1 and y in column 2.
  const std::array<Cross, 3> crosses{Cross{{m, k, n}, 0, 1, 2}, Cross{{k, n, m}, 1, 2, 0},
                                     Cross{{n, m, k}, 2, 0, 1}};
  std::vector<TrilinearTerm> out;
  for (const auto& cr : crosses) {
    const TrilinearDecomposition tri = trilinear_from_bilinear(best_catalog_algorithm(cr.shape));
    const auto oa = static_cast<std::int64_t>(g.offset(cr.a_row, 0));
    const auto ob = static_cast<std::int64_t>(g.offset(cr.b_row, 1));
    const auto od = static_cast<std::int64_t>(g.offset(cr.d_row, 2));
    for (const auto& t : tri.terms)
      out.push_back(TrilinearTerm{t.a.shifted(oa).scaled(-1), t.d.shifted(ob), t.b.shifted(od)});
  }
  return out;
}

TrilinearDecomposition finish(TrilinearDecomposition dec) {
  dec.canonicalize();
  auto res = verify(dec);
  if (!res) throw VerificationError("generated decomposition '" + dec.name + "' failed verification: " + res.describe());
  return dec;
}

void require_positive(std::size_t m, std::size_t k, std::size_t n) {
  if (m == 0 || k == 0 || n == 0) throw DimensionError("aggregation dimensions must be positive");
}

}  // namespace

BilinearAlgorithm best_catalog_algorithm(const MMShape& s) {
  if (s == MMShape{2, 2, 2}) return catalog::strassen();
  return catalog::straightforward(s.m, s.k, s.n);
}

TrilinearDecomposition aggregate_two(std::size_t m, std::size_t k, std::size_t n) {
  require_positive(m, k, n);
  const GeneratingTable g(2, m, k, n);
  TrilinearDecomposition dec;
  dec.name = "aggregate_two" + MMShape{m, k, n}.str();
  dec.layout = g.layout();
  dec.target = dec.layout.trace_tensor();
  dec.terms = aggregates(g, m, k, n);
  dec.aggregate_terms = dec.terms.size();
  auto corr = pair_corrections(g);
  dec.terms.insert(dec.terms.end(), corr.begin(), corr.end());
  return finish(std::move(dec));
}

TrilinearDecomposition aggregate_three(std::size_t m, std::size_t k, std::size_t n,
                                       AggregateThreeReport* report) {
  require_positive(m, k, n);
  const GeneratingTable g(3, m, k, n);
  TrilinearDecomposition dec;
  dec.name = "aggregate_three" + MMShape{m, k, n}.str();
  dec.layout = g.layout();
  dec.target = dec.layout.trace_tensor();
  dec.terms = aggregates(g, m, k, n);
  dec.aggregate_terms = dec.terms.size();
  auto pairs = pair_corrections(g);
  auto cross = cross_corrections(g, m, k, n);
  if (report) *report = {dec.aggregate_terms, pairs.size(), cross.size()};
  dec.terms.insert(dec.terms.end(), pairs.begin(), pairs.end());
  dec.terms.insert(dec.terms.end(), cross.begin(), cross.end());
  return finish(std::move(dec));
}

}  // namespace fastmm
