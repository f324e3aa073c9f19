#pragma once

#include "fastmm/matrix.hpp"
#include "fastmm/ring.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fastmm {

/// Shape of MM(m,k,n): an m x k matrix times a k x n matrix.
///
/// Variable layout used everywhere in the library (0-based, row-major):
///   a_{ij} -> i*k + j      (A is m x k)
///   b_{jh} -> j*n + h      (B is k x n)
///   c_{ih} -> i*n + h      (C = AB is m x n)
///   d_{hi} -> h*m + i      (D is n x m, the trace-form partner of C)
struct MMShape {
  std::size_t m = 1, k = 1, n = 1;

  std::size_t a_size() const { return m * k; }
  std::size_t b_size() const { return k * n; }
  std::size_t c_size() const { return m * n; }
  std::size_t volume() const { return m * k * n; }

  /// Shape of the dual obtained by equating coefficients of the A-side.
  MMShape rotated() const { return {k, n, m}; }
  /// Shape of the transposed problem (AB)^T = B^T A^T.
  MMShape transposed() const { return {n, k, m}; }

  friend bool operator==(const MMShape&, const MMShape&) = default;
  friend auto operator<=>(const MMShape&, const MMShape&) = default;
  std::string str() const;
};

using Index3 = std::array<std::uint32_t, 3>;

/// Coefficients t[α][β][γ] of a bilinear map c_γ = Σ t[α][β][γ] a_α b_β, or
/// of a trilinear form Σ t[α][β][γ] a_α b_β d_γ. Stored sparsely.
class TargetTensor {
 public:
  TargetTensor() = default;
  TargetTensor(std::size_t dim_a, std::size_t dim_b, std::size_t dim_c);

  /// Bilinear MM(m,k,n) tensor indexed by (a_{ij}, b_{jh}, c_{ih}).
  static TargetTensor mm(const MMShape& s);
  /// Trace form Σ_p trace(A_p B_p D_p) over concatenated variable families.
  static TargetTensor trace(const std::vector<MMShape>& problems);

  std::size_t dim_a() const { return dims_[0]; }
  std::size_t dim_b() const { return dims_[1]; }
  std::size_t dim_c() const { return dims_[2]; }

  void set(Index3 idx, const Rational& value);
  void add(Index3 idx, const Rational& value);
  Rational at(Index3 idx) const;
  std::size_t nonzeros() const { return coeffs_.size(); }
  const std::map<Index3, Rational>& entries() const { return coeffs_; }

  /// t'[β][γ][α] = t[α][β][γ]: the tensor seen from the next role.
  TargetTensor rotated() const;

  friend bool operator==(const TargetTensor&, const TargetTensor&) = default;

 private:
  void check(const Index3& idx) const;

  std::array<std::size_t, 3> dims_{0, 0, 0};
  std::map<Index3, Rational> coeffs_;
};

/// Several independent MM problems laid out as consecutive variable
/// families on each side (A-side, B-side, D-side).
struct DisjointMMTarget {
  std::vector<MMShape> problems;

  std::size_t a_offset(std::size_t p) const;
  std::size_t b_offset(std::size_t p) const;
  std::size_t d_offset(std::size_t p) const;
  std::size_t dim_a() const { return a_offset(problems.size()); }
  std::size_t dim_b() const { return b_offset(problems.size()); }
  std::size_t dim_d() const { return d_offset(problems.size()); }
  std::size_t variable_count() const { return dim_a() + dim_b() + dim_d(); }

  TargetTensor trace_tensor() const { return TargetTensor::trace(problems); }
  DisjointMMTarget rotated() const;

  friend bool operator==(const DisjointMMTarget&, const DisjointMMTarget&) = default;
};

/// Sparse linear form Σ c_t x_{idx_t}; entries sorted by index, no zeros.
class SparseForm {
 public:
  using Entry = std::pair<std::uint32_t, Rational>;

  SparseForm() = default;
  SparseForm(std::initializer_list<Entry> entries);

  void add(std::uint32_t idx, const Rational& c);
  Rational at(std::uint32_t idx) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  SparseForm scaled(const Rational& c) const;
  SparseForm shifted(std::int64_t delta) const;
  /// Entries with index in [lo, hi), re-based to start at 0.
  SparseForm restricted(std::uint32_t lo, std::uint32_t hi) const;
  std::uint32_t max_index() const;

  friend bool operator==(const SparseForm&, const SparseForm&) = default;
  friend bool operator<(const SparseForm& a, const SparseForm& b) { return a.entries_ < b.entries_; }

 private:
  std::vector<Entry> entries_;
};

struct TrilinearTerm {
  SparseForm a, b, d;

  friend bool operator==(const TrilinearTerm&, const TrilinearTerm&) = default;
  friend bool operator<(const TrilinearTerm& x, const TrilinearTerm& y) {
    if (x.a == y.a) {
      if (x.b == y.b) return x.d < y.d;
      return x.b < y.b;
    }
    return x.a < y.a;
  }
};

/// Straight-line program of additions/subtractions. Values are the inputs
/// followed by one value per step; each output names a value.
struct LinearProgram {
  struct Step {
    std::size_t lhs = 0, rhs = 0;
    bool subtract = false;
    friend bool operator==(const Step&, const Step&) = default;
  };
  std::size_t inputs = 0;
  std::vector<Step> steps;
  std::vector<std::size_t> outputs;

  /// outputs x inputs coefficient matrix computed by the program.
  Matrix<Rational> coefficients() const;
  friend bool operator==(const LinearProgram&, const LinearProgram&) = default;
};

/// Explicit evaluation order with shared subexpressions for the A-forms,
/// B-forms and the output recombination.
struct EvaluationSchedule {
  LinearProgram a_forms, b_forms, combine;
  friend bool operator==(const EvaluationSchedule&, const EvaluationSchedule&) = default;
};

/// Rank-r bilinear algorithm: l_q = U[q]·a, l'_q = V[q]·b, c = W·(l ∘ l').
struct BilinearAlgorithm {
  std::string name;
  std::optional<MMShape> shape;     // set for matrix multiplication problems
  std::optional<TargetTensor> problem;  // set for other bilinear problems
  Matrix<Rational> U;  // r x dim_a
  Matrix<Rational> V;  // r x dim_b
  Matrix<Rational> W;  // dim_c x r
  std::optional<EvaluationSchedule> schedule;
  bool verified = false;

  std::size_t rank() const { return U.rows(); }
  std::size_t dim_a() const { return U.cols(); }
  std::size_t dim_b() const { return V.cols(); }
  std::size_t dim_c() const { return W.rows(); }

  TargetTensor target() const;
  /// Throws DimensionError if U, V, W, shape and schedule disagree.
  void check_consistent() const;
  bool coefficients_in_integers() const;

  friend bool operator==(const BilinearAlgorithm& x, const BilinearAlgorithm& y) {
    return x.shape == y.shape && x.problem == y.problem && x.U == y.U && x.V == y.V && x.W == y.W;
  }
};

/// Decomposition of a trilinear (trace) form into rank-1 products.
struct TrilinearDecomposition {
  std::string name;
  DisjointMMTarget layout;  // empty problem list for non-MM bilinear problems
  TargetTensor target;
  std::vector<TrilinearTerm> terms;
  std::size_t aggregate_terms = 0;

  std::size_t rank() const { return terms.size(); }
  bool is_mm() const { return !layout.problems.empty(); }
  /// Sorts terms by their lexicographic form signature.
  void canonicalize();
};

enum class Role { A, B, D };

struct VerifyResult {
  bool ok = true;
  std::optional<Index3> violated;
  Rational expected, actual;

  explicit operator bool() const { return ok; }
  std::string describe() const;
};

VerifyResult verify_target(const BilinearAlgorithm& alg, const TargetTensor& t);
VerifyResult verify_target(const TrilinearDecomposition& dec, const TargetTensor& t);
inline VerifyResult verify(const BilinearAlgorithm& alg) { return verify_target(alg, alg.target()); }
inline VerifyResult verify(const TrilinearDecomposition& dec) { return verify_target(dec, dec.target); }

/// Runs verification, sets the flag and throws VerificationError on failure.
BilinearAlgorithm& require_verified(BilinearAlgorithm& alg);

/// ω = 3 log_{mkn}(r).
double exponent_from_rank(std::size_t m, std::size_t k, std::size_t n, double rank);

TrilinearDecomposition trilinear_from_bilinear(const BilinearAlgorithm& alg);
std::vector<BilinearAlgorithm> bilinear_from_trilinear(const TrilinearDecomposition& dec, Role role);
std::vector<BilinearAlgorithm> transpose_duals(const BilinearAlgorithm& alg);

/// Rotates roles so that the chosen role becomes the output (D) side.
TrilinearDecomposition rotate_roles(const TrilinearDecomposition& dec, Role role);
/// Transposed algorithm for MM(n,k,m).
BilinearAlgorithm transpose(const BilinearAlgorithm& alg);

/// Equality up to term order.
bool same_terms(const TrilinearDecomposition& x, const TrilinearDecomposition& y);
bool same_terms(const BilinearAlgorithm& x, const BilinearAlgorithm& y);

SparseForm row_form(const Matrix<Rational>& m, std::size_t row);
SparseForm column_form(const Matrix<Rational>& m, std::size_t col);

// ---------------------------------------------------------------------------
// Application

namespace detail {

template <class T>
struct ScalarOps {
  OpCounter& ctr;

  T zero() const { return RingTraits<T>::zero(); }
  T add(const T& x, const T& y) {
    ++ctr.adds;
    return x + y;
  }
  T sub(const T& x, const T& y) {
    ++ctr.adds;
    return x - y;
  }
  T neg(const T& x) const { return -x; }
  T scale(const T& x, const Rational& c) {
    ++ctr.mults;
    return x * RingTraits<T>::from_coefficient(c);
  }
  T mul(const T& x, const T& y) {
    ++ctr.mults;
    return x * y;
  }
};

template <class E, class Ops>
E eval_form(const Matrix<Rational>& coeffs, std::size_t row, const std::vector<E>& x, Ops& ops) {
  bool started = false;
  E value = ops.zero();
  for (std::size_t t = 0; t < coeffs.cols(); ++t) {
    const Rational& c = coeffs(row, t);
    if (c == 0) continue;
    const bool unit = (c == 1), neg_unit = (c == -1);
    if (!started) {
      value = unit ? x[t] : neg_unit ? ops.neg(x[t]) : ops.scale(x[t], c);
      started = true;
    } else if (unit) {
      value = ops.add(value, x[t]);
    } else if (neg_unit) {
      value = ops.sub(value, x[t]);
    } else {
      value = ops.add(value, ops.scale(x[t], c));
    }
  }
  return value;
}

template <class E, class Ops>
std::vector<E> eval_forms(const Matrix<Rational>& coeffs, const std::vector<E>& x, Ops& ops) {
  std::vector<E> out;
  out.reserve(coeffs.rows());
  for (std::size_t r = 0; r < coeffs.rows(); ++r) out.push_back(eval_form(coeffs, r, x, ops));
  return out;
}

template <class E, class Ops>
std::vector<E> run_program(const LinearProgram& p, const std::vector<E>& x, Ops& ops) {
  std::vector<E> values(x);
  values.reserve(x.size() + p.steps.size());
  for (const auto& s : p.steps) {
    E v = s.subtract ? ops.sub(values[s.lhs], values[s.rhs]) : ops.add(values[s.lhs], values[s.rhs]);
    values.push_back(std::move(v));
  }
  std::vector<E> out;
  out.reserve(p.outputs.size());
  for (auto idx : p.outputs) out.push_back(values[idx]);
  return out;
}

template <class E, class Ops>
std::vector<E> apply_elements(const BilinearAlgorithm& alg, const std::vector<E>& x,
                              const std::vector<E>& y, Ops& ops) {
  const bool sched = alg.schedule.has_value();
  std::vector<E> l = sched ? run_program(alg.schedule->a_forms, x, ops) : eval_forms(alg.U, x, ops);
  std::vector<E> lp = sched ? run_program(alg.schedule->b_forms, y, ops) : eval_forms(alg.V, y, ops);
  std::vector<E> prods;
  prods.reserve(alg.rank());
  for (std::size_t q = 0; q < alg.rank(); ++q) prods.push_back(ops.mul(l[q], lp[q]));
  return sched ? run_program(alg.schedule->combine, prods, ops) : eval_forms(alg.W, prods, ops);
}

template <class T>
void require_representable(const BilinearAlgorithm& alg) {
  for (const auto* m : {&alg.U, &alg.V, &alg.W})
    for (const auto& c : m->entries())
      if (!RingTraits<T>::representable(c))
        throw CoefficientError("algorithm '" + alg.name + "' has coefficient " + c.get_str() +
                               " not representable in the entry ring");
}

inline std::size_t square_base(const BilinearAlgorithm& alg) {
  if (!alg.shape || alg.shape->m != alg.shape->k || alg.shape->k != alg.shape->n)
    throw DimensionError("recursive application needs a square MM(b,b,b) algorithm");
  return alg.shape->m;
}

template <class T>
Matrix<T> recurse(const BilinearAlgorithm& alg, std::size_t base, const Matrix<T>& a,
                  const Matrix<T>& b, std::size_t cutoff, OpCounter& ctr);

template <class T>
struct BlockOps {
  const BilinearAlgorithm& alg;
  std::size_t base, block, cutoff;
  OpCounter& ctr;

  Matrix<T> zero() const { return Matrix<T>::zeros(block, block); }
  Matrix<T> add(const Matrix<T>& x, const Matrix<T>& y) { return fastmm::add(x, y, ctr); }
  Matrix<T> sub(const Matrix<T>& x, const Matrix<T>& y) { return fastmm::sub(x, y, ctr); }
  Matrix<T> neg(const Matrix<T>& x) const { return negate(x); }
  Matrix<T> scale(const Matrix<T>& x, const Rational& c) {
    return fastmm::scale(x, RingTraits<T>::from_coefficient(c), ctr);
  }
  Matrix<T> mul(const Matrix<T>& x, const Matrix<T>& y) {
    return recurse(alg, base, x, y, cutoff, ctr);
  }
};

template <class T>
Matrix<T> recurse(const BilinearAlgorithm& alg, std::size_t base, const Matrix<T>& a,
                  const Matrix<T>& b, std::size_t cutoff, OpCounter& ctr) {
  const std::size_t size = a.rows();
  if (size <= cutoff) return mm_naive(a, b, ctr);
  if (size % base != 0)
    throw DimensionError("size " + std::to_string(size) + " is not divisible by the block base " +
                         std::to_string(base) + "; pad the operands first");
  auto ga = block_split(a, base, base);
  auto gb = block_split(b, base, base);
  std::vector<Matrix<T>> x, y;
  x.reserve(base * base);
  y.reserve(base * base);
  for (std::size_t i = 0; i < base; ++i)
    for (std::size_t j = 0; j < base; ++j) {
      x.push_back(std::move(ga[i][j]));
      y.push_back(std::move(gb[i][j]));
    }
  BlockOps<T> ops{alg, base, size / base, cutoff, ctr};
  std::vector<Matrix<T>> c = apply_elements(alg, x, y, ops);
  BlockGrid<T> gc(base);
  for (std::size_t i = 0; i < base; ++i)
    for (std::size_t h = 0; h < base; ++h) gc[i].push_back(std::move(c[i * base + h]));
  return block_join(gc);
}

}  // namespace detail

/// Applies a bilinear algorithm to flat input vectors (any bilinear problem).
template <class T>
std::vector<T> apply_vector(const BilinearAlgorithm& alg, const std::vector<T>& x,
                            const std::vector<T>& y, OpCounter& ctr) {
  if (x.size() != alg.dim_a() || y.size() != alg.dim_b())
    throw DimensionError("apply_vector: input sizes do not match the algorithm");
  detail::require_representable<T>(alg);
  detail::ScalarOps<T> ops{ctr};
  return detail::apply_elements(alg, x, y, ops);
}

/// One level of the algorithm on scalar entries: exactly rank() multiplications
/// of linear-form values plus coefficient scalings other than ±1.
template <class T>
Matrix<T> apply_scalar(const BilinearAlgorithm& alg, const Matrix<T>& a, const Matrix<T>& b,
                       OpCounter& ctr) {
  if (!alg.shape) throw DimensionError("apply_scalar: algorithm is not a matrix multiplication");
  const MMShape s = *alg.shape;
  if (a.rows() != s.m || a.cols() != s.k || b.rows() != s.k || b.cols() != s.n)
    throw DimensionError("apply_scalar: operands do not match MM" + s.str());
  auto c = apply_vector(alg, a.entries(), b.entries(), ctr);
  return Matrix<T>(s.m, s.n, std::move(c));
}

/// Recursive block application of a square MM(b,b,b) algorithm. Operands must
/// be N x N with N reducible to <= cutoff by repeated division by b; no
/// padding happens here.
template <class T>
Matrix<T> apply_recursive(const BilinearAlgorithm& alg, const Matrix<T>& a, const Matrix<T>& b,
                          std::size_t cutoff, OpCounter& ctr) {
  const std::size_t base = detail::square_base(alg);
  if (cutoff < 1) throw DimensionError("cutoff must be at least 1");
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw DimensionError("apply_recursive: operands must be square and of equal size");
  detail::require_representable<T>(alg);
  return detail::recurse(alg, base, a, b, cutoff, ctr);
}

/// Smallest size >= n that recursion with the given base reduces to <= cutoff.
std::size_t padded_size(std::size_t n, std::size_t base, std::size_t cutoff);

/// Top-level driver: pads square or rectangular operands with zeros, runs the
/// recursion and crops the product.
template <class T>
Matrix<T> multiply(const BilinearAlgorithm& alg, const Matrix<T>& a, const Matrix<T>& b,
                   std::size_t cutoff, OpCounter& ctr) {
  if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
  const std::size_t base = detail::square_base(alg);
  const std::size_t n = std::max({a.rows(), a.cols(), b.cols()});
  if (n <= cutoff) return mm_naive(a, b, ctr);
  const std::size_t s = padded_size(n, base, cutoff);
  Matrix<T> c = apply_recursive(alg, pad_to(a, s, s), pad_to(b, s, s), cutoff, ctr);
  return crop(c, a.rows(), b.cols());
}

}  // namespace fastmm
