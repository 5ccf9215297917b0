#include "idemcalc/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace idem {

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw ShapeError("entry count " + std::to_string(data_.size()) + " does not match " + std::to_string(rows) +
                     "x" + std::to_string(cols));
  for (auto& x : data_) x.canonicalize();
}

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("ragged matrix literal");
    for (const auto& x : r) {
      data_.push_back(x);
      data_.back().canonicalize();
    }
  }
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_columns(std::size_t rows, std::span<const Vector> columns) {
  RatMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw ShapeError("column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

RatMatrix RatMatrix::column(const Vector& v) { return from_columns(v.size(), std::span<const Vector>(&v, 1)); }

Vector RatMatrix::col(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

bool RatMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return sgn(x) == 0; });
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RatMatrix RatMatrix::submatrix(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const {
  RatMatrix s(row_idx.size(), col_idx.size());
  for (std::size_t i = 0; i < row_idx.size(); ++i)
    for (std::size_t j = 0; j < col_idx.size(); ++j) s(i, j) = (*this)(row_idx[i], col_idx[j]);
  return s;
}

RatMatrix RatMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw ShapeError("block out of range");
  RatMatrix s(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) s(i, j) = (*this)(r0 + i, c0 + j);
  return s;
}

RatMatrix RatMatrix::vstack(const RatMatrix& below) const {
  if (rows_ == 0) return below;
  if (below.rows_ == 0) return *this;
  if (cols_ != below.cols_) throw ShapeError("vstack column mismatch");
  RatMatrix out = *this;
  out.rows_ += below.rows_;
  out.data_.insert(out.data_.end(), below.data_.begin(), below.data_.end());
  return out;
}

RatMatrix RatMatrix::hstack(const RatMatrix& right) const {
  if (rows_ != right.rows_) throw ShapeError("hstack row mismatch");
  RatMatrix out(rows_, cols_ + right.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c);
    for (std::size_t c = 0; c < right.cols_; ++c) out(r, cols_ + c) = right(r, c);
  }
  return out;
}

RatMatrix& RatMatrix::operator+=(const RatMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("addition of mismatched shapes");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

RatMatrix& RatMatrix::operator-=(const RatMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("subtraction of mismatched shapes");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

RatMatrix& RatMatrix::operator*=(const Rational& s) {
  for (auto& x : data_) x *= s;
  return *this;
}

std::string RatMatrix::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? ", " : "") << to_string((*this)(r, c));
    os << ']';
  }
  os << ']';
  return os.str();
}

RatMatrix operator+(RatMatrix a, const RatMatrix& b) { return a += b; }
RatMatrix operator-(RatMatrix a, const RatMatrix& b) { return a -= b; }
RatMatrix operator-(RatMatrix a) { return a *= Rational(-1); }
RatMatrix operator*(const Rational& s, RatMatrix a) { return a *= s; }

}  // namespace idem
