#pragma once

#include "fastmm/matrix.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace fastmm::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611ULL);
  return gen;
}

inline long rand_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

inline Rational rand_rational(long span = 20) {
  Rational q{Integer(rand_int(-span, span)), Integer(rand_int(1, span))};
  q.canonicalize();
  return q;
}

template <class T>
T rand_entry();
template <>
inline Integer rand_entry<Integer>() { return Integer(rand_int(-50, 50)); }
template <>
inline Rational rand_entry<Rational>() { return rand_rational(); }
template <>
inline double rand_entry<double>() { return static_cast<double>(rand_int(-50, 50)); }

template <class T>
Matrix<T> rand_matrix(std::size_t rows, std::size_t cols) {
  std::vector<T> e;
  e.reserve(rows * cols);
  for (std::size_t i = 0; i < rows * cols; ++i) e.push_back(rand_entry<T>());
  return Matrix<T>(rows, cols, std::move(e));
}

template <class T>
std::vector<T> rand_vector(std::size_t n) {
  std::vector<T> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(rand_entry<T>());
  return v;
}

inline Matrix<Integer> reference_product(const Matrix<Integer>& a, const Matrix<Integer>& b) {
  OpCounter ignored;
  return mm_naive(a, b, ignored);
}

}  // namespace fastmm::testing

#include "fastmm/bilinear.hpp"

namespace fastmm::testing {

/// Adds a random nonzero delta to one random coefficient of U, V or W.
inline BilinearAlgorithm mutate(BilinearAlgorithm alg) {
  const long which = rand_int(0, 2);
  Matrix<Rational>& m = which == 0 ? alg.U : which == 1 ? alg.V : alg.W;
  const auto r = static_cast<std::size_t>(rand_int(0, static_cast<long>(m.rows()) - 1));
  const auto c = static_cast<std::size_t>(rand_int(0, static_cast<long>(m.cols()) - 1));
  Rational delta = 0;
  while (delta == 0) delta = rand_rational(3);
  m(r, c) += delta;
  alg.schedule.reset();  // the addition schedule encodes the old coefficients
  alg.verified = false;
  return alg;
}

/// Same for one coefficient of one term of a decomposition.
inline TrilinearDecomposition mutate(TrilinearDecomposition dec) {
  auto& term = dec.terms[static_cast<std::size_t>(rand_int(0, static_cast<long>(dec.terms.size()) - 1))];
  const long which = rand_int(0, 2);
  SparseForm& f = which == 0 ? term.a : which == 1 ? term.b : term.d;
  const std::size_t dim = which == 0 ? dec.target.dim_a() : which == 1 ? dec.target.dim_b() : dec.target.dim_c();
  const auto idx = static_cast<std::uint32_t>(rand_int(0, static_cast<long>(dim) - 1));
  Rational delta = 0;
  while (delta == 0) delta = rand_rational(3);
  f.add(idx, delta);
  return dec;
}

}  // namespace fastmm::testing
