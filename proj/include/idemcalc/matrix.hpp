#pragma once

#include "idemcalc/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace idem {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Vector = std::vector<Rational>;

/// Dense row-major matrix of rationals. Zero-sized shapes are allowed and
/// stand for maps to or from the zero space.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RatMatrix identity(std::size_t n);
  static RatMatrix zero(std::size_t rows, std::size_t cols) { return RatMatrix(rows, cols); }
  static RatMatrix from_columns(std::size_t rows, std::span<const Vector> columns);
  static RatMatrix column(const Vector& v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::span<const Rational> entries() const noexcept { return data_; }
  std::span<const Rational> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  Vector col(std::size_t c) const;

  bool is_zero() const;
  RatMatrix transpose() const;
  RatMatrix submatrix(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const;
  RatMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  /// Stacks `below` under this matrix; column counts must agree.
  RatMatrix vstack(const RatMatrix& below) const;
  RatMatrix hstack(const RatMatrix& right) const;

  RatMatrix& operator+=(const RatMatrix& other);
  RatMatrix& operator-=(const RatMatrix& other);
  RatMatrix& operator*=(const Rational& s);

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string str() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RatMatrix operator+(RatMatrix a, const RatMatrix& b);
RatMatrix operator-(RatMatrix a, const RatMatrix& b);
RatMatrix operator-(RatMatrix a);
RatMatrix operator*(const Rational& s, RatMatrix a);

/// Exact product; throws ShapeError unless a.cols() == b.rows().
RatMatrix matmul(const RatMatrix& a, const RatMatrix& b);
inline RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) { return matmul(a, b); }

/// Product of a chain of factors, left to right.
template <class... Rest>
RatMatrix chain(const RatMatrix& first, const Rest&... rest) {
  RatMatrix out = first;
  ((out = matmul(out, rest)), ...);
  return out;
}

}  // namespace idem
