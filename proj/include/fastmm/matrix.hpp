#pragma once

#include "fastmm/ring.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace fastmm {

/// Arithmetic-operation tally. `adds` covers additions and subtractions.
struct OpCounter {
  std::uint64_t mults = 0;
  std::uint64_t adds = 0;

  std::uint64_t total() const { return mults + adds; }

  OpCounter& operator+=(const OpCounter& o) {
    mults += o.mults;
    adds += o.adds;
    return *this;
  }
  friend OpCounter operator+(OpCounter a, const OpCounter& b) { return a += b; }
  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

/// Dense row-major matrix. Entries need not form a ring for storage; the
/// arithmetic helpers below require RingTraits<T>.
template <class T>
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, T fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  }

  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
    if (data_.size() != rows * cols) throw DimensionError("entry count does not match rows*cols");
  }

  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    if (rows_ == 0 || cols_ == 0) throw DimensionError("matrix dimensions must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix zeros(std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols, RingTraits<T>::zero());
  }

  static Matrix identity(std::size_t n) {
    Matrix m = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = RingTraits<T>::one();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<T>& entries() const { return data_; }
  std::vector<T>& entries() { return data_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
using BlockGrid = std::vector<std::vector<Matrix<T>>>;

namespace detail {
template <class T>
void require_same_shape(const Matrix<T>& a, const Matrix<T>& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
}
}  // namespace detail

/// Straightforward product: k multiplications and k-1 additions per entry.
template <class T>
Matrix<T> mm_naive(const Matrix<T>& a, const Matrix<T>& b, OpCounter& ctr) {
  if (a.cols() != b.rows())
    throw DimensionError("mm_naive: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + ")");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Matrix<T> c = Matrix<T>::zeros(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t h = 0; h < n; ++h) {
      T acc = a(i, 0) * b(0, h);
      for (std::size_t j = 1; j < k; ++j) acc += a(i, j) * b(j, h);
      c(i, h) = std::move(acc);
    }
  }
  ctr.mults += m * n * k;
  ctr.adds += m * n * (k - 1);
  return c;
}

template <class T>
Matrix<T> add(const Matrix<T>& a, const Matrix<T>& b, OpCounter& ctr) {
  detail::require_same_shape(a, b, "add");
  std::vector<T> out(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) out[t] = a.entries()[t] + b.entries()[t];
  ctr.adds += a.size();
  return Matrix<T>(a.rows(), a.cols(), std::move(out));
}

template <class T>
Matrix<T> sub(const Matrix<T>& a, const Matrix<T>& b, OpCounter& ctr) {
  detail::require_same_shape(a, b, "sub");
  std::vector<T> out(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) out[t] = a.entries()[t] - b.entries()[t];
  ctr.adds += a.size();
  return Matrix<T>(a.rows(), a.cols(), std::move(out));
}

// Negation is a sign flip, not an addition, so it is not counted.
template <class T>
Matrix<T> negate(const Matrix<T>& a) {
  std::vector<T> out(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) out[t] = -a.entries()[t];
  return Matrix<T>(a.rows(), a.cols(), std::move(out));
}

template <class T>
Matrix<T> scale(const Matrix<T>& a, const T& c, OpCounter& ctr) {
  std::vector<T> out(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) out[t] = a.entries()[t] * c;
  ctr.mults += a.size();
  return Matrix<T>(a.rows(), a.cols(), std::move(out));
}

/// Splits into an rb x cb grid of equal blocks.
template <class T>
BlockGrid<T> block_split(const Matrix<T>& a, std::size_t rb, std::size_t cb) {
  if (rb == 0 || cb == 0 || a.rows() % rb != 0 || a.cols() % cb != 0)
    throw DimensionError("block_split: block counts must divide the dimensions");
  const std::size_t br = a.rows() / rb, bc = a.cols() / cb;
  BlockGrid<T> grid(rb);
  for (std::size_t I = 0; I < rb; ++I) {
    grid[I].reserve(cb);
    for (std::size_t J = 0; J < cb; ++J) {
      std::vector<T> e;
      e.reserve(br * bc);
      for (std::size_t i = 0; i < br; ++i)
        for (std::size_t j = 0; j < bc; ++j) e.push_back(a(I * br + i, J * bc + j));
      grid[I].emplace_back(br, bc, std::move(e));
    }
  }
  return grid;
}

template <class T>
Matrix<T> block_join(const BlockGrid<T>& grid) {
  if (grid.empty() || grid.front().empty()) throw DimensionError("block_join: empty grid");
  const std::size_t rb = grid.size(), cb = grid.front().size();
  std::vector<std::size_t> heights(rb), widths(cb);
  for (std::size_t I = 0; I < rb; ++I) {
    if (grid[I].size() != cb) throw DimensionError("block_join: ragged grid");
    heights[I] = grid[I][0].rows();
  }
  for (std::size_t J = 0; J < cb; ++J) widths[J] = grid[0][J].cols();
  for (std::size_t I = 0; I < rb; ++I)
    for (std::size_t J = 0; J < cb; ++J)
      if (grid[I][J].rows() != heights[I] || grid[I][J].cols() != widths[J])
        throw DimensionError("block_join: blocks do not tile");

  std::size_t rows = 0, cols = 0;
  for (auto h : heights) rows += h;
  for (auto w : widths) cols += w;
  Matrix<T> out(rows, cols, grid[0][0](0, 0));
  std::size_t r0 = 0;
  for (std::size_t I = 0; I < rb; ++I) {
    std::size_t c0 = 0;
    for (std::size_t J = 0; J < cb; ++J) {
      const auto& blk = grid[I][J];
      for (std::size_t i = 0; i < blk.rows(); ++i)
        for (std::size_t j = 0; j < blk.cols(); ++j) out(r0 + i, c0 + j) = blk(i, j);
      c0 += widths[J];
    }
    r0 += heights[I];
  }
  return out;
}

/// Smallest base^p (p >= 0) that is >= n.
inline std::size_t next_block_power(std::size_t n, std::size_t base) {
  if (base < 2) throw DimensionError("block base must be at least 2");
  std::size_t p = 1;
  while (p < n) p *= base;
  return p;
}

/// Embeds `a` in the top-left corner of a zero matrix of the given size.
template <class T>
Matrix<T> pad_to(const Matrix<T>& a, std::size_t rows, std::size_t cols) {
  if (rows < a.rows() || cols < a.cols()) throw DimensionError("pad_to: target smaller than input");
  Matrix<T> out = Matrix<T>::zeros(rows, cols);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  return out;
}

template <class T>
Matrix<T> pad_to_block_power(const Matrix<T>& a, std::size_t base) {
  const std::size_t s = next_block_power(std::max(a.rows(), a.cols()), base);
  return pad_to(a, s, s);
}

template <class T>
Matrix<T> crop(const Matrix<T>& a, std::size_t rows, std::size_t cols) {
  if (rows > a.rows() || cols > a.cols()) throw DimensionError("crop: target larger than input");
  std::vector<T> e;
  e.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) e.push_back(a(i, j));
  return Matrix<T>(rows, cols, std::move(e));
}

template <class T>
std::vector<T> flatten(const Matrix<T>& a) {
  return a.entries();
}

}  // namespace fastmm
