#pragma once

#include "fastmm/bilinear.hpp"

namespace fastmm {

// Trilinear aggregation for Disjoint MM.
//
// Index conventions: i runs over 0..m-1, j over 0..k-1, h over 0..n-1.
// Two problems, trace(ABD + UVW):
//   A-side: a_ij (m x k), u_jh (k x n)
//   B-side: b_jh (k x n), v_hi (n x m)
//   D-side: d_hi (n x m), w_ij (m x k)
// so the second product UV is MM(k,n,m) with W as its trace partner.
// Three problems add x_hi, y_ij, z_jh, i.e. a third product XY of shape
// MM(n,m,k).

/// S - T1 - T2 - T3 with mkn aggregates (a+u)(b+v)(d+w) and mk+kn+nm
/// correction terms. Verified; throws VerificationError otherwise.
TrilinearDecomposition aggregate_two(std::size_t m, std::size_t k, std::size_t n);

struct AggregateThreeReport {
  std::size_t aggregates = 0;       // mkn
  std::size_t pair_corrections = 0; // terms over two-index groups
  std::size_t cross_corrections = 0;// terms cancelling the three full cross traces
  std::size_t corrections() const { return pair_corrections + cross_corrections; }
};

/// mkn aggregates (a+u+x)(b+v+y)(d+w+z) plus derived corrections for
/// trace(ABD + UVW + XYZ). Verified; throws VerificationError otherwise.
TrilinearDecomposition aggregate_three(std::size_t m, std::size_t k, std::size_t n,
                                       AggregateThreeReport* report = nullptr);
inline TrilinearDecomposition aggregate_three(std::size_t n, AggregateThreeReport* report = nullptr) {
  return aggregate_three(n, n, n, report);
}

/// Best catalog algorithm for a single MM shape (Strassen for (2,2,2),
/// textbook otherwise).
BilinearAlgorithm best_catalog_algorithm(const MMShape& s);

}  // namespace fastmm
