#pragma once

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "rational.hpp"

namespace dvbsym {

class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<Rational>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionError("ragged matrix literal");
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static Matrix identity(size_t n) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Matrix zero(size_t r, size_t c) { return Matrix(r, c); }
  static Matrix diagonal(const std::vector<Rational>& d) {
    Matrix m(d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static Matrix column(const std::vector<Rational>& v) {
    Matrix m(v.size(), 1);
    for (size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  bool isZero() const {
    for (const auto& x : data_)
      if (sgn(x) != 0) return false;
    return true;
  }
  bool isSquare() const { return rows_ == cols_; }
  bool isIdentity() const { return isSquare() && *this == identity(rows_); }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix rowRange(size_t begin, size_t end) const {
    Matrix m(end - begin, cols_);
    for (size_t i = begin; i < end; ++i)
      for (size_t j = 0; j < cols_; ++j) m(i - begin, j) = (*this)(i, j);
    return m;
  }
  Matrix colRange(size_t begin, size_t end) const {
    Matrix m(rows_, end - begin);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = begin; j < end; ++j) m(i, j - begin) = (*this)(i, j);
    return m;
  }
  Matrix selectCols(const std::vector<size_t>& idx) const {
    Matrix m(rows_, idx.size());
    for (size_t i = 0; i < rows_; ++i)
      for (size_t k = 0; k < idx.size(); ++k) m(i, k) = (*this)(i, idx[k]);
    return m;
  }
  Matrix selectRows(const std::vector<size_t>& idx) const {
    Matrix m(idx.size(), cols_);
    for (size_t k = 0; k < idx.size(); ++k)
      for (size_t j = 0; j < cols_; ++j) m(k, j) = (*this)(idx[k], j);
    return m;
  }
  std::vector<Rational> col(size_t j) const {
    std::vector<Rational> v(rows_);
    for (size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void setBlock(size_t r0, size_t c0, const Matrix& b) {
    for (size_t i = 0; i < b.rows_; ++i)
      for (size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    checkSame(a, b, "+");
    Matrix m = a;
    for (size_t k = 0; k < m.data_.size(); ++k) m.data_[k] += b.data_[k];
    return m;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    checkSame(a, b, "-");
    Matrix m = a;
    for (size_t k = 0; k < m.data_.size(); ++k) m.data_[k] -= b.data_[k];
    return m;
  }
  friend Matrix operator-(const Matrix& a) {
    Matrix m = a;
    for (auto& x : m.data_) x = -x;
    return m;
  }
  friend Matrix operator*(const Rational& s, const Matrix& a) {
    Matrix m = a;
    for (auto& x : m.data_) x *= s;
    return m;
  }
  // the maps built here are mostly block-sparse, so zero entries are skipped
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionError("matrix product " + a.shape() + " * " + b.shape());
    Matrix m(a.rows_, b.cols_);
    Rational t;
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t k = 0; k < a.cols_; ++k) {
        const Rational& x = a(i, k);
        if (sgn(x) == 0) continue;
        for (size_t j = 0; j < b.cols_; ++j) {
          const Rational& y = b(k, j);
          if (sgn(y) == 0) continue;
          t = x * y;
          m(i, j) += t;
        }
      }
    return m;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << "[";
    for (size_t i = 0; i < m.rows_; ++i) {
      os << (i ? ", [" : "[");
      for (size_t j = 0; j < m.cols_; ++j) os << (j ? ", " : "") << m(i, j).get_str();
      os << "]";
    }
    return os << "]";
  }

 private:
  static void checkSame(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw DimensionError(std::string("matrix ") + op + " " + a.shape() + " vs " + b.shape());
  }

  size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

// Linear maps are matrices acting on column vectors: codomain = rows, domain = cols.
using LinMap = Matrix;

inline Matrix hstack(const std::vector<Matrix>& parts) {
  if (parts.empty()) return {};
  size_t r = parts.front().rows(), c = 0;
  for (const auto& p : parts) {
    if (p.rows() != r) throw DimensionError("hstack row mismatch");
    c += p.cols();
  }
  Matrix m(r, c);
  size_t off = 0;
  for (const auto& p : parts) {
    m.setBlock(0, off, p);
    off += p.cols();
  }
  return m;
}

inline Matrix vstack(const std::vector<Matrix>& parts) {
  if (parts.empty()) return {};
  size_t c = parts.front().cols(), r = 0;
  for (const auto& p : parts) {
    if (p.cols() != c) throw DimensionError("vstack column mismatch");
    r += p.rows();
  }
  Matrix m(r, c);
  size_t off = 0;
  for (const auto& p : parts) {
    m.setBlock(off, 0, p);
    off += p.rows();
  }
  return m;
}

inline Matrix blockDiag(const std::vector<Matrix>& parts) {
  size_t r = 0, c = 0;
  for (const auto& p : parts) {
    r += p.rows();
    c += p.cols();
  }
  Matrix m(r, c);
  size_t ro = 0, co = 0;
  for (const auto& p : parts) {
    m.setBlock(ro, co, p);
    ro += p.rows();
    co += p.cols();
  }
  return m;
}

}  // namespace dvbsym
