#pragma once

#include "fastmm/bilinear.hpp"

#include <map>
#include <string>
#include <vector>

namespace fastmm {

/// Integer polynomial in λ, coefficients stored lowest degree first.
class LambdaPoly {
 public:
  LambdaPoly() = default;
  LambdaPoly(long c) : coeffs_{Integer(c)} { normalize(); }  // NOLINT: implicit on purpose
  explicit LambdaPoly(std::vector<Integer> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

  /// c·λ^power.
  static LambdaPoly monomial(const Integer& c, std::size_t power);

  bool is_zero() const { return coeffs_.empty(); }
  /// Degree, or -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  /// Lowest power with a nonzero coefficient, or -1 for zero.
  int valuation() const;
  Integer coefficient(std::size_t power) const;
  const std::vector<Integer>& coefficients() const { return coeffs_; }

  Rational eval(const Rational& x) const;
  double eval(double x) const;

  LambdaPoly& operator+=(const LambdaPoly& o);
  friend LambdaPoly operator+(LambdaPoly a, const LambdaPoly& b) { return a += b; }
  friend LambdaPoly operator-(const LambdaPoly& a) {
    LambdaPoly r = a;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  friend LambdaPoly operator-(const LambdaPoly& a, const LambdaPoly& b) { return a + (-b); }
  friend LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b);
  friend bool operator==(const LambdaPoly&, const LambdaPoly&) = default;

  std::string str() const;

 private:
  void normalize();
  std::vector<Integer> coeffs_;
};

/// Border-rank decomposition  λ^scale · Σ_q U_q(λ)·V_q(λ)·W_q(λ)  of a
/// disjoint trace form. U is r x dim_a, V is r x dim_b, W is dim_d x r, all
/// over λ-polynomials. After applying the scale the expansion is
/// target + λ E_1 + ... + λ^degree E_degree.
struct APAAlgorithm {
  std::string name;
  DisjointMMTarget layout;
  Matrix<LambdaPoly> U, V, W;
  int scale = 0;
  int degree = 0;

  std::size_t border_rank() const { return U.rows(); }
  TargetTensor target() const { return layout.trace_tensor(); }
  void check_consistent() const;
};

/// Aggregates (a + λu)(b + λv)(λ²d + w) over all (i,j,h), minus the two
/// correction sums, with overall factor λ^-2. Border rank mkn+mk+kn, degree 2.
APAAlgorithm apa_aggregate(std::size_t m, std::size_t k, std::size_t n);

/// Embeds an exact MM algorithm as a degree-0 APA algorithm.
APAAlgorithm apa_from_bilinear(const BilinearAlgorithm& alg);

/// λ^scale Σ U V W as a map from (α, β, γ) to polynomials. Throws
/// VerificationError if a negative power of λ survives.
std::map<Index3, LambdaPoly> apa_expand(const APAAlgorithm& alg);

struct APACheckResult {
  bool ok = true;
  std::string message;
  explicit operator bool() const { return ok; }
};

/// Exact check that the expansion equals target + O(λ) with degree at most
/// alg.degree.
APACheckResult apa_symbolic_check(const APAAlgorithm& alg);

/// One evaluation at λ = t in exact arithmetic; counts the border_rank
/// bilinear products only.
std::vector<Rational> apa_evaluate(const APAAlgorithm& alg, const std::vector<Rational>& x,
                                   const std::vector<Rational>& y, const Rational& t, OpCounter& ctr);

/// Approximate disjoint products in double precision; 0 < λ < 1.
std::vector<double> apa_apply_numeric(const APAAlgorithm& alg, const std::vector<double>& x,
                                      const std::vector<double>& y, double lambda);

/// Exact outputs from degree+1 evaluations combined with the Lagrange
/// weights at λ = 0. Nodes default to 1..degree+1. Costs
/// (degree+1)·border_rank counted products. At the trilinear level the
/// same recovery costs a factor (degree+1)^2, i.e. 9 for degree 2.
std::vector<Rational> apa_lift_exact(const APAAlgorithm& alg, const std::vector<Rational>& x,
                                     const std::vector<Rational>& y, OpCounter& ctr,
                                     std::vector<Rational> nodes = {});

/// 3·ln(0.5(mkn+mk+kn)) / ln(mkn).
double apa_exponent(std::size_t m, std::size_t k, std::size_t n);

/// Exponent bound after p self-applications of a border-rank r, degree d
/// algorithm for MM(m,k,n), paying (pd+1)^2 for the exact recovery:
/// 3·ln(r^p (pd+1)^2) / ln((mkn)^p).
double apa_effective_exponent(std::size_t m, std::size_t k, std::size_t n, double border_rank,
                              std::size_t degree, std::size_t powers);

/// a·2^d + u, the integer image of a + λu at λ = 2^-d. With a, u < 2^d it
/// has at most 2d bits.
Integer lambda_packed_operand(const Integer& a, const Integer& u, std::size_t d_bits);

// Packing of disjoint problem operands into side vectors. A and B blocks are
// row-major; the output of problem p is read from the D-side as c_ih at
// d_offset(p) + h*m + i.
template <class T>
std::vector<T> pack_side(const DisjointMMTarget& layout, const std::vector<Matrix<T>>& blocks, int side) {
  if (blocks.size() != layout.problems.size()) throw DimensionError("pack_side: one block per problem expected");
  std::vector<T> out;
  for (std::size_t p = 0; p < blocks.size(); ++p) {
    const MMShape& s = layout.problems[p];
    const std::size_t rows = side == 0 ? s.m : s.k, cols = side == 0 ? s.k : s.n;
    if (blocks[p].rows() != rows || blocks[p].cols() != cols)
      throw DimensionError("pack_side: block " + std::to_string(p) + " does not match MM" + s.str());
    out.insert(out.end(), blocks[p].entries().begin(), blocks[p].entries().end());
  }
  return out;
}

template <class T>
std::vector<Matrix<T>> unpack_products(const DisjointMMTarget& layout, const std::vector<T>& out) {
  if (out.size() != layout.dim_d()) throw DimensionError("unpack_products: wrong output length");
  std::vector<Matrix<T>> res;
  for (std::size_t p = 0; p < layout.problems.size(); ++p) {
    const MMShape& s = layout.problems[p];
    const std::size_t od = layout.d_offset(p);
    Matrix<T> c(s.m, s.n, out[od]);
    for (std::size_t i = 0; i < s.m; ++i)
      for (std::size_t h = 0; h < s.n; ++h) c(i, h) = out[od + h * s.m + i];
    res.push_back(std::move(c));
  }
  return res;
}

}  // namespace fastmm
