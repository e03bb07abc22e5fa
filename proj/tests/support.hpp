#pragma once

// Seeded samplers for graded spaces, wide embeddings and compatible map pairs.
// Everything is built block-by-block in weight-sorted coordinates and then moved
// to random coordinates by a unimodular change of basis.

#include <map>
#include <utility>

#include "dvbsym/normal.hpp"
#include "dvbsym/rng.hpp"

namespace dvbsym::testing {

// pieces of a DVS in the order base, A-fiber, B-fiber, core, with (h, v) weights
inline const std::vector<std::pair<unsigned, unsigned>> kDvsWeights{{0, 0}, {0, 1}, {1, 0}, {1, 1}};

struct Graded {
  std::vector<size_t> pieces;  // piece sizes in sorted coordinates
  Matrix U, Uinv;              // sorted -> presented coordinates
  Presented space;

  size_t offset(size_t piece) const {
    size_t o = 0;
    for (size_t k = 0; k < piece; ++k) o += pieces[k];
    return o;
  }
  size_t dim() const { return offset(pieces.size()); }
};

inline ScalingAction conjugated(const ScalingAction& a, const Matrix& U, const Matrix& Uinv) {
  std::map<unsigned, Matrix> ps;
  for (const auto& [k, p] : a.weightProjections) ps.emplace(k, U * p * Uinv);
  return makeAction(U.rows(), ps);
}

inline Graded gradedBundle(Rng& rng, const std::string& name, size_t base, size_t fiber) {
  Graded g;
  g.pieces = {base, fiber};
  std::vector<unsigned> w(base, 0);
  w.insert(w.end(), fiber, 1);
  g.U = rng.unimodular(base + fiber, 3);
  g.Uinv = inverse(g.U);
  g.space = primitive(name, VBSpace{base + fiber, conjugated(diagonalAction(w), g.U, g.Uinv)});
  return g;
}

inline Graded gradedDVS(Rng& rng, const std::string& name, const std::vector<size_t>& pieces) {
  Graded g;
  g.pieces = pieces;
  std::vector<unsigned> h, v;
  for (size_t k = 0; k < 4; ++k) {
    h.insert(h.end(), pieces[k], kDvsWeights[k].first);
    v.insert(v.end(), pieces[k], kDvsWeights[k].second);
  }
  g.U = rng.unimodular(g.dim(), 3);
  g.Uinv = inverse(g.U);
  DVS d{g.dim(), conjugated(diagonalAction(h), g.U, g.Uinv), conjugated(diagonalAction(v), g.U, g.Uinv)};
  g.space = primitive(name, d);
  return g;
}

// A map given by blocks between sorted pieces, expressed in presented coordinates.
using Blocks = std::map<std::pair<size_t, size_t>, Matrix>;  // (target piece, source piece)

inline Matrix blockMatrix(const Graded& src, const Graded& tgt, const Blocks& blocks) {
  Matrix f(tgt.dim(), src.dim());
  for (const auto& [at, b] : blocks) {
    if (b.rows() != tgt.pieces[at.first] || b.cols() != src.pieces[at.second])
      throw DimensionError("blockMatrix: block " + b.shape());
    f.setBlock(tgt.offset(at.first), src.offset(at.second), b);
  }
  return tgt.U * f * src.Uinv;
}

// [I; 0] of size r x c
inline Matrix standardInclusion(size_t r, size_t c) {
  Matrix m(r, c);
  for (size_t k = 0; k < c; ++k) m(k, k) = 1;
  return m;
}

// [[top, right], [0, bottom]] completing a block whose first columns are fixed
inline Matrix extendColumns(Rng& rng, const Matrix& top, size_t rows, size_t cols) {
  Matrix m = rng.matrix(rows, cols, 2);
  for (size_t c = 0; c < top.cols(); ++c)
    for (size_t r = 0; r < rows; ++r) m(r, c) = r < top.rows() ? top(r, c) : Rational(0);
  return m;
}

inline size_t upTo(Rng& rng, size_t n) { return rng.index(n + 1); }

// --- quotient of tangent bundles: E1 > F1, E2 > F2 with phi iota1 = iota2 psi -------------

struct QuotientTangentSample {
  Graded e1, f1, e2, f2;
  Matrix iota1, iota2, phi, psi;
};

inline QuotientTangentSample quotientTangentSample(Rng& rng, size_t maxDim = 3) {
  QuotientTangentSample s;
  size_t m1 = upTo(rng, maxDim), m2 = upTo(rng, maxDim);
  size_t e1 = upTo(rng, maxDim), e2 = upTo(rng, maxDim);
  size_t f1 = upTo(rng, e1), f2 = upTo(rng, e2);
  s.e1 = gradedBundle(rng, "E1", m1, e1);
  s.f1 = gradedBundle(rng, "F1", m1, f1);
  s.e2 = gradedBundle(rng, "E2", m2, e2);
  s.f2 = gradedBundle(rng, "F2", m2, f2);
  s.iota1 = blockMatrix(s.f1, s.e1, {{{0, 0}, Matrix::identity(m1)}, {{1, 1}, standardInclusion(e1, f1)}});
  s.iota2 = blockMatrix(s.f2, s.e2, {{{0, 0}, Matrix::identity(m2)}, {{1, 1}, standardInclusion(e2, f2)}});
  Matrix a = rng.matrix(m2, m1, 2), b = rng.matrix(f2, f1, 2);
  s.psi = blockMatrix(s.f1, s.f2, {{{0, 0}, a}, {{1, 1}, b}});
  s.phi = blockMatrix(s.e1, s.e2, {{{0, 0}, a}, {{1, 1}, extendColumns(rng, b, e2, e1)}});
  return s;
}

// --- pullback of a horizontal quotient along a side map --------------------------------------

struct PullbackQuotientSample {
  Graded d, q, u, v;
  Matrix iota, k, phi, psi;
  Orientation orientation = Orientation::Horizontal;
};

// iota: Q -> D horizontal wide embedding, k: V -> U wide, phi: U -> side B of D,
// psi: V -> side B of Q. The vertical orientation swaps the two actions of D and Q.
inline PullbackQuotientSample pullbackQuotientSample(Rng& rng, size_t maxDim = 2) {
  PullbackQuotientSample s;
  size_t b = upTo(rng, maxDim), a = upTo(rng, maxDim), be = upTo(rng, maxDim), c = upTo(rng, maxDim);
  size_t be2 = upTo(rng, be), c2 = upTo(rng, c);
  size_t mu = upTo(rng, maxDim), eu = upTo(rng, maxDim), ev = upTo(rng, eu);
  s.d = gradedDVS(rng, "D", {b, a, be, c});
  s.q = gradedDVS(rng, "Q", {b, a, be2, c2});
  s.u = gradedBundle(rng, "U", mu, eu);
  s.v = gradedBundle(rng, "V", mu, ev);
  s.iota = blockMatrix(s.q, s.d,
                       {{{0, 0}, Matrix::identity(b)},
                        {{1, 1}, Matrix::identity(a)},
                        {{2, 2}, standardInclusion(be, be2)},
                        {{3, 3}, standardInclusion(c, c2)}});
  s.k = blockMatrix(s.v, s.u, {{{0, 0}, Matrix::identity(mu)}, {{1, 1}, standardInclusion(eu, ev)}});
  Matrix pb = rng.matrix(b, mu, 2), sf = rng.matrix(be2, ev, 2);
  s.psi = blockMatrix(s.v, s.q, {{{0, 0}, pb}, {{2, 1}, sf}});
  s.phi = blockMatrix(s.u, s.d, {{{0, 0}, pb}, {{2, 1}, extendColumns(rng, sf, be, eu)}});
  if (rng.coin()) {
    s.orientation = Orientation::Vertical;
    s.d.space = swapActions(s.d.space);
    s.q.space = swapActions(s.q.space);
  }
  return s;
}

// --- quotient flips ---------------------------------------------------------------------------

// iota1: P1 -> D1 vertical embedding; flipD, flipP: a flip D1 -> flip(D1) restricting to
// P1; (phi, psi): flip(iota1) => iota2 with iota2: P2 -> D2 horizontal.
struct QuotientFlipSample {
  Graded d1, p1, d2, p2;
  Presented flipD1, flipP1;
  Matrix iota1, iota2, flipD, flipP, phi, psi;
};

inline QuotientFlipSample quotientFlipSample(Rng& rng, size_t maxDim = 2) {
  QuotientFlipSample s;
  size_t b = upTo(rng, maxDim), a = upTo(rng, maxDim), be = upTo(rng, maxDim), c = upTo(rng, maxDim);
  size_t a1 = upTo(rng, a), c1 = upTo(rng, c);
  s.d1 = gradedDVS(rng, "D1", {b, a, be, c});
  s.p1 = gradedDVS(rng, "P1", {b, a1, be, c1});
  s.iota1 = blockMatrix(s.p1, s.d1,
                        {{{0, 0}, Matrix::identity(b)},
                         {{1, 1}, standardInclusion(a, a1)},
                         {{2, 2}, Matrix::identity(be)},
                         {{3, 3}, standardInclusion(c, c1)}});
  s.flipD1 = swapActions(s.d1.space);
  s.flipP1 = swapActions(s.p1.space);

  // a dvb-automorphism of D1 preserving P1, read as a flip D1 -> flip(D1)
  Blocks gp, gd;
  for (size_t k = 0; k < 4; ++k) {
    const size_t n = s.p1.pieces[k], m = s.d1.pieces[k];
    Matrix inner = rng.unimodular(n, 2);
    gp[{k, k}] = inner;
    // [[inner, *], [0, invertible]]
    Matrix g = extendColumns(rng, inner, m, m);
    g.setBlock(n, n, rng.unimodular(m - n, 2));
    gd[{k, k}] = g;
  }
  s.flipP = blockMatrix(s.p1, s.p1, gp);
  s.flipD = blockMatrix(s.d1, s.d1, gd);

  // flip(D1) has pieces (b, be, a, c); D2 gets arbitrary pieces and a horizontal embedding
  size_t b2 = upTo(rng, maxDim), a2 = upTo(rng, maxDim), be2 = upTo(rng, maxDim), c2 = upTo(rng, maxDim);
  size_t be3 = upTo(rng, be2), c3 = upTo(rng, c2);
  s.d2 = gradedDVS(rng, "D2", {b2, a2, be2, c2});
  s.p2 = gradedDVS(rng, "P2", {b2, a2, be3, c3});
  s.iota2 = blockMatrix(s.p2, s.d2,
                        {{{0, 0}, Matrix::identity(b2)},
                         {{1, 1}, Matrix::identity(a2)},
                         {{2, 2}, standardInclusion(be2, be3)},
                         {{3, 3}, standardInclusion(c2, c3)}});
  // pieces of D1 seen through the flip: base, A = old B, B = old A, core
  Matrix mb = rng.matrix(b2, b, 2), mA = rng.matrix(a2, be, 2);
  Matrix mB = rng.matrix(be3, a1, 2), mC = rng.matrix(c3, c1, 2);
  s.psi = blockMatrix(s.p1, s.p2, {{{0, 0}, mb}, {{1, 2}, mA}, {{2, 1}, mB}, {{3, 3}, mC}});
  s.phi = blockMatrix(s.d1, s.d2,
                      {{{0, 0}, mb},
                       {{1, 2}, mA},
                       {{2, 1}, extendColumns(rng, mB, be2, a)},
                       {{3, 3}, extendColumns(rng, mC, c2, c)}});
  return s;
}

}  // namespace dvbsym::testing

namespace dvbsym::testing {

// a left inverse of an injective matrix
inline Matrix leftInverse(const Matrix& j) {
  Matrix jt = j.transpose();
  return inverse(jt * j) * jt;
}

// A 2-map j1 => j2 with a random top: bottom = j2 top L + R (1 - j1 L) for L j1 = 1.
inline TwoMap randomTwoMap(Rng& rng, const Matrix& j1, const Matrix& j2) {
  Matrix top = rng.matrix(j2.cols(), j1.cols(), 2);
  Matrix L = leftInverse(j1);
  Matrix R = rng.matrix(j2.rows(), j1.rows(), 2);
  Matrix bottom = j2 * top * L + R * (Matrix::identity(j1.rows()) - j1 * L);
  return {top, bottom, j1, j2};
}

// H: i => i' stacked over a given K with H.bottom = K.top; retries until i' is injective.
inline std::optional<TwoMap> twoMapOver(Rng& rng, const TwoMap& K, size_t m1, size_t m2, int retries = 50) {
  const Matrix& b = K.top;  // N1 -> N2
  for (int attempt = 0; attempt < retries; ++attempt) {
    Matrix left = rng.injective(b.cols(), std::min(m1, b.cols()));
    Matrix top = rng.injective(m2, left.cols());
    Matrix L = leftInverse(top);
    Matrix R = rng.matrix(b.rows(), m2, 2);
    Matrix right = b * left * L + R * (Matrix::identity(m2) - top * L);
    if (right.rows() >= right.cols() && isInjective(right)) return TwoMap{top, b, left, right};
  }
  return std::nullopt;
}

}  // namespace dvbsym::testing
