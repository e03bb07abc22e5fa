#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace dvbsym {

// Gauss-Jordan elimination. Zero rows are kept at the bottom.
inline std::pair<Matrix, std::vector<size_t>> rref(Matrix m) {
  std::vector<size_t> pivots;
  const size_t R = m.rows(), C = m.cols();
  size_t row = 0;
  Rational t;
  for (size_t c = 0; c < C && row < R; ++c) {
    size_t p = row;
    while (p < R && sgn(m(p, c)) == 0) ++p;
    if (p == R) continue;
    if (p != row)
      for (size_t j = c; j < C; ++j) std::swap(m(p, j), m(row, j));
    if (m(row, c) != 1) {
      Rational inv = 1 / m(row, c);
      for (size_t j = c; j < C; ++j)
        if (sgn(m(row, j)) != 0) m(row, j) *= inv;
    }
    for (size_t i = 0; i < R; ++i) {
      if (i == row || sgn(m(i, c)) == 0) continue;
      Rational factor = m(i, c);
      for (size_t j = c; j < C; ++j) {
        if (sgn(m(row, j)) == 0) continue;
        t = factor * m(row, j);
        m(i, j) -= t;
      }
    }
    pivots.push_back(c);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

inline size_t rank(const Matrix& m) { return rref(m).second.size(); }
inline bool isInjective(const Matrix& m) { return rank(m) == m.cols(); }
inline bool isSurjective(const Matrix& m) { return rank(m) == m.rows(); }
inline bool isBijective(const Matrix& m) { return m.isSquare() && isInjective(m); }

// A subspace of Q^n stored by its canonical RREF basis (one vector per row).
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(size_t ambientDim) : ambient_(ambientDim), basis_(0, ambientDim) {}

  // row span of an arbitrary generating set
  static Subspace fromRows(const Matrix& rows) {
    Subspace s(rows.cols());
    auto [r, piv] = rref(rows);
    s.basis_ = r.rowRange(0, piv.size());
    s.pivots_ = std::move(piv);
    return s;
  }
  static Subspace fromColumns(const Matrix& cols) { return fromRows(cols.transpose()); }
  static Subspace full(size_t n) { return fromRows(Matrix::identity(n)); }

  size_t ambientDim() const { return ambient_; }
  size_t rank() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<size_t>& pivots() const { return pivots_; }
  // basis vectors as columns: the inclusion Q^rank -> Q^n
  Matrix inclusion() const { return basis_.transpose(); }

  // The pivot coordinates recover coefficients; the result is meaningful only on members.
  Matrix retraction() const {
    Matrix r(rank(), ambient_);
    for (size_t i = 0; i < pivots_.size(); ++i) r(i, pivots_[i]) = 1;
    return r;
  }

  bool contains(const Matrix& columns) const {
    if (columns.rows() != ambient_) throw DimensionError("subspace membership: wrong ambient");
    if (columns.cols() == 0) return true;
    return inclusion() * (retraction() * columns) == columns;
  }
  bool contains(const Subspace& other) const { return contains(other.inclusion()); }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

 private:
  size_t ambient_ = 0;
  Matrix basis_;
  std::vector<size_t> pivots_;
};

inline Subspace image(const Matrix& f) { return Subspace::fromColumns(f); }

inline Subspace kernel(const Matrix& f) {
  auto [r, piv] = rref(f);
  const size_t n = f.cols();
  std::vector<bool> isPivot(n, false);
  for (size_t p : piv) isPivot[p] = true;
  std::vector<size_t> freeCols;
  for (size_t c = 0; c < n; ++c)
    if (!isPivot[c]) freeCols.push_back(c);
  Matrix gens(freeCols.size(), n);
  for (size_t k = 0; k < freeCols.size(); ++k) {
    gens(k, freeCols[k]) = 1;
    for (size_t i = 0; i < piv.size(); ++i) gens(k, piv[i]) = -r(i, freeCols[k]);
  }
  return Subspace::fromRows(gens);
}

inline Subspace sum(const Subspace& a, const Subspace& b) {
  return Subspace::fromRows(vstack({a.basis(), b.basis()}));
}

inline Subspace intersection(const Subspace& a, const Subspace& b) {
  Matrix A = a.inclusion(), B = b.inclusion();
  Subspace k = kernel(hstack({A, -B}));
  return Subspace::fromColumns(A * k.inclusion().rowRange(0, A.cols()));
}

inline Subspace imageOf(const Matrix& f, const Subspace& s) {
  return Subspace::fromColumns(f * s.inclusion());
}

inline Subspace directSum(const Subspace& a, const Subspace& b) {
  return Subspace::fromRows(blockDiag({a.basis(), b.basis()}));
}

// X with A X = B; throws if none exists. When A is injective the solution is unique.
inline Matrix solve(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows()) throw DimensionError("solve: " + A.shape() + " vs " + B.shape());
  auto [r, piv] = rref(hstack({A, B}));
  Matrix X(A.cols(), B.cols());
  for (size_t i = 0; i < piv.size(); ++i) {
    if (piv[i] >= A.cols()) throw CompatibilityError("solve: right-hand side outside the image");
    for (size_t j = 0; j < B.cols(); ++j) X(piv[i], j) = r(i, A.cols() + j);
  }
  return X;
}

inline Matrix inverse(const Matrix& A) {
  if (!isBijective(A)) throw CompatibilityError("inverse of a non-bijective map " + A.shape());
  return solve(A, Matrix::identity(A.rows()));
}

struct QuotientPresentation {
  size_t ambientDim = 0;
  Subspace sub;
  size_t quotientDim = 0;
  Matrix projection;  // ambient -> quotient
  Matrix section;     // quotient -> ambient
};

// Section: coordinate vectors on the non-pivot columns of sub's RREF basis.
inline QuotientPresentation quotient(size_t ambientDim, const Subspace& sub) {
  if (sub.ambientDim() != ambientDim) throw DimensionError("quotient: ambient mismatch");
  QuotientPresentation q;
  q.ambientDim = ambientDim;
  q.sub = sub;
  std::vector<bool> isPivot(ambientDim, false);
  for (size_t p : sub.pivots()) isPivot[p] = true;
  std::vector<size_t> comp;
  for (size_t c = 0; c < ambientDim; ++c)
    if (!isPivot[c]) comp.push_back(c);
  q.quotientDim = comp.size();
  q.section = Matrix(ambientDim, comp.size());
  q.projection = Matrix(comp.size(), ambientDim);
  const Matrix& b = sub.basis();
  for (size_t k = 0; k < comp.size(); ++k) {
    q.section(comp[k], k) = 1;
    q.projection(k, comp[k]) = 1;
    for (size_t i = 0; i < sub.pivots().size(); ++i)
      if (sgn(b(i, comp[k])) != 0) q.projection(k, sub.pivots()[i]) = -b(i, comp[k]);
  }
  return q;
}

// Presentation with a caller-chosen complement: the columns of `complement` span a
// complement of sub and become the section.
inline QuotientPresentation quotientWithSection(const Subspace& sub, const Matrix& complement) {
  const size_t n = sub.ambientDim();
  if (complement.rows() != n || complement.cols() + sub.rank() != n)
    throw DimensionError("quotientWithSection: complement has the wrong size");
  Matrix full = hstack({complement, sub.inclusion()});
  if (!isBijective(full)) throw CompatibilityError("quotientWithSection: not a complement");
  QuotientPresentation q;
  q.ambientDim = n;
  q.sub = sub;
  q.quotientDim = complement.cols();
  q.section = complement;
  q.projection = inverse(full).rowRange(0, complement.cols());
  return q;
}

inline Matrix inducedQuotientMap(const Matrix& phi, const QuotientPresentation& q1,
                                 const QuotientPresentation& q2) {
  if (phi.cols() != q1.ambientDim || phi.rows() != q2.ambientDim)
    throw DimensionError("inducedQuotientMap: " + phi.shape());
  if (!q2.sub.contains(phi * q1.sub.inclusion()))
    throw CompatibilityError("inducedQuotientMap: map does not preserve the subspaces");
  return q2.projection * phi * q1.section;
}

// Variant with the sub-objects explicit: F1 -incl1-> E1, F2 -incl2-> E2, psi: F1 -> F2.
inline Matrix inducedQuotientMap(const Matrix& phi, const Matrix& psi, const Matrix& incl1,
                                 const Matrix& incl2, const QuotientPresentation& q1,
                                 const QuotientPresentation& q2) {
  if (phi * incl1 != incl2 * psi)
    throw CompatibilityError("inducedQuotientMap: phi does not restrict to psi");
  if (image(incl1) != q1.sub || image(incl2) != q2.sub)
    throw CompatibilityError("inducedQuotientMap: presentations do not match the inclusions");
  return inducedQuotientMap(phi, q1, q2);
}

struct FiberProduct {
  Subspace P;  // inside A (+) B
  Matrix pr1;  // P-coordinates -> A
  Matrix pr2;  // P-coordinates -> B
};

inline FiberProduct fiberProduct(const Matrix& f, const Matrix& g) {
  if (f.rows() != g.rows()) throw DimensionError("fiberProduct: codomain mismatch");
  FiberProduct fp;
  fp.P = kernel(hstack({f, -g}));
  Matrix inc = fp.P.inclusion();
  fp.pr1 = inc.rowRange(0, f.cols());
  fp.pr2 = inc.rowRange(f.cols(), f.cols() + g.cols());
  return fp;
}

// the unique map W -> P through which (u, v) factors
inline Matrix factorThrough(const FiberProduct& fp, const Matrix& u, const Matrix& v) {
  return solve(fp.P.inclusion(), vstack({u, v}));
}

inline bool isExactAt(const Matrix& f, const Matrix& g) {
  if (f.rows() != g.cols()) throw DimensionError("isExactAt: " + f.shape() + " then " + g.shape());
  return image(f) == kernel(g);
}

}  // namespace dvbsym
