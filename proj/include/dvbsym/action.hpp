#pragma once

#include <map>
#include <vector>

#include "linalg.hpp"

namespace dvbsym {

// A regular scaling action lambda -> sum_k lambda^k P_k, stored by its weight projections.
struct ScalingAction {
  size_t ambientDim = 0;
  std::map<unsigned, Matrix> weightProjections;

  Matrix projection(unsigned k) const {
    auto it = weightProjections.find(k);
    return it == weightProjections.end() ? Matrix(ambientDim, ambientDim) : it->second;
  }
  unsigned maxWeight() const {
    return weightProjections.empty() ? 0 : weightProjections.rbegin()->first;
  }

  friend bool operator==(const ScalingAction& a, const ScalingAction& b) {
    if (a.ambientDim != b.ambientDim) return false;
    unsigned w = std::max(a.maxWeight(), b.maxWeight());
    for (unsigned k = 0; k <= w; ++k)
      if (a.projection(k) != b.projection(k)) return false;
    return true;
  }
  friend bool operator!=(const ScalingAction& a, const ScalingAction& b) { return !(a == b); }
};

// Zero projections are dropped so that equal actions have equal maps.
inline ScalingAction makeAction(size_t n, const std::map<unsigned, Matrix>& projections) {
  ScalingAction a;
  a.ambientDim = n;
  for (const auto& [k, p] : projections) {
    if (p.rows() != n || p.cols() != n) throw DimensionError("action projection " + p.shape());
    if (!p.isZero()) a.weightProjections.emplace(k, p);
  }
  return a;
}

inline ScalingAction trivialAction(size_t n) { return makeAction(n, {{0, Matrix::identity(n)}}); }

// weight per coordinate
inline ScalingAction diagonalAction(const std::vector<unsigned>& weights) {
  std::map<unsigned, Matrix> ps;
  const size_t n = weights.size();
  for (size_t i = 0; i < n; ++i) {
    auto it = ps.try_emplace(weights[i], n, n).first;
    it->second(i, i) = 1;
  }
  return makeAction(n, ps);
}

inline bool isValidAction(const ScalingAction& a) {
  Matrix total(a.ambientDim, a.ambientDim);
  for (const auto& [k, p] : a.weightProjections) {
    if (p * p != p) return false;
    for (const auto& [l, q] : a.weightProjections)
      if (k != l && !(p * q).isZero()) return false;
    total = total + p;
  }
  return total.isIdentity() || a.ambientDim == 0;
}

inline Matrix evaluate(const ScalingAction& a, const Rational& lambda) {
  Matrix m(a.ambientDim, a.ambientDim);
  for (const auto& [k, p] : a.weightProjections) {
    Rational c = 1;
    for (unsigned i = 0; i < k; ++i) c *= lambda;
    m = m + c * p;
  }
  return m;
}

// Inverse of evaluate(., 2): spectral projections for the eigenvalues 2^k.
inline ScalingAction recoverAction(size_t dim, const Matrix& sampleAt2) {
  if (sampleAt2.rows() != dim || sampleAt2.cols() != dim)
    throw DimensionError("recoverAction: sample is " + sampleAt2.shape());
  std::vector<Matrix> eigenBases;
  std::vector<unsigned> weights;
  size_t found = 0;
  Rational ev = 1;
  for (unsigned k = 0; k < 64 && found < dim; ++k, ev *= 2) {
    Subspace e = kernel(sampleAt2 - ev * Matrix::identity(dim));
    if (e.rank() == 0) continue;
    eigenBases.push_back(e.inclusion());
    weights.push_back(k);
    found += e.rank();
  }
  if (found != dim)
    throw HomogeneityError("recoverAction: spectrum is not a set of powers of two");
  Matrix V = hstack(eigenBases);
  if (dim == 0) return makeAction(0, {});
  Matrix Vinv = inverse(V);
  std::map<unsigned, Matrix> ps;
  size_t off = 0;
  for (size_t b = 0; b < eigenBases.size(); ++b) {
    size_t r = eigenBases[b].cols();
    ps.emplace(weights[b], eigenBases[b] * Vinv.rowRange(off, off + r));
    off += r;
  }
  return makeAction(dim, ps);
}

inline bool isEquivariant(const Matrix& f, const ScalingAction& a, const ScalingAction& b) {
  if (f.cols() != a.ambientDim || f.rows() != b.ambientDim)
    throw DimensionError("isEquivariant: map " + f.shape());
  unsigned w = std::max(a.maxWeight(), b.maxWeight());
  for (unsigned k = 0; k <= w; ++k)
    if (f * a.projection(k) != b.projection(k) * f) return false;
  return true;
}

// Equivariance tested on sample scalars only.
inline bool isEquivariantAt(const Matrix& f, const ScalingAction& a, const ScalingAction& b,
                            const std::vector<Rational>& lambdas) {
  for (const auto& l : lambdas)
    if (f * evaluate(a, l) != evaluate(b, l) * f) return false;
  return true;
}

inline bool isInvariant(const Subspace& s, const ScalingAction& a) {
  for (const auto& [k, p] : a.weightProjections)
    if (!s.contains(p * s.inclusion())) return false;
  return true;
}

// inc: sub-coordinates -> ambient, ret: a left inverse of inc on the subspace
inline ScalingAction restrictAction(const ScalingAction& a, const Matrix& inc, const Matrix& ret) {
  std::map<unsigned, Matrix> ps;
  for (const auto& [k, p] : a.weightProjections) ps.emplace(k, ret * p * inc);
  return makeAction(inc.cols(), ps);
}

inline ScalingAction inducedAction(const ScalingAction& a, const QuotientPresentation& q) {
  std::map<unsigned, Matrix> ps;
  for (const auto& [k, p] : a.weightProjections) ps.emplace(k, q.projection * p * q.section);
  return makeAction(q.quotientDim, ps);
}

struct VBSpace {
  size_t ambientDim = 0;
  ScalingAction action;

  Subspace base() const { return image(action.projection(0)); }
  Subspace fiber() const { return image(action.projection(1)); }
  size_t baseDim() const { return base().rank(); }
  size_t fiberRank() const { return fiber().rank(); }

  friend bool operator==(const VBSpace& a, const VBSpace& b) {
    return a.ambientDim == b.ambientDim && a.action == b.action;
  }
};

inline bool isValidBundle(const VBSpace& e) {
  return e.action.ambientDim == e.ambientDim && e.action.maxWeight() <= 1 && isValidAction(e.action);
}

inline VBSpace makeBundle(const ScalingAction& a) {
  VBSpace e{a.ambientDim, a};
  if (!isValidBundle(e)) throw HomogeneityError("not a vector bundle action");
  return e;
}

// tangent bundle of Q^n in coordinates (x, u)
inline VBSpace tangentBundle(size_t n) {
  std::vector<unsigned> w(2 * n, 0);
  for (size_t i = n; i < 2 * n; ++i) w[i] = 1;
  return makeBundle(diagonalAction(w));
}

// the weight-0 retraction onto base coordinates
inline Matrix baseProjection(const VBSpace& e) {
  Subspace b = e.base();
  return b.retraction() * e.action.projection(0);
}

struct PullbackBundle {
  VBSpace bundle;
  FiberProduct carrier;  // inside P (+) E
};

// h maps P into base coordinates of e (the RREF basis of its base).
inline PullbackBundle pullbackAction(const Matrix& h, const VBSpace& e) {
  Subspace b = e.base();
  if (h.rows() != b.rank()) throw DimensionError("pullbackAction: h does not land in the base");
  PullbackBundle pb;
  pb.carrier = fiberProduct(h, baseProjection(e));
  const size_t p = h.cols();
  ScalingAction prod = makeAction(p + e.ambientDim,
                                  {{0, blockDiag({Matrix::identity(p), e.action.projection(0)})},
                                   {1, blockDiag({Matrix(p, p), e.action.projection(1)})}});
  const Subspace& P = pb.carrier.P;
  if (!isInvariant(P, prod)) throw InvarianceError("pullbackAction: carrier not invariant");
  pb.bundle = makeBundle(restrictAction(prod, P.inclusion(), P.retraction()));
  return pb;
}

struct QuotientBundle {
  VBSpace bundle;
  QuotientPresentation presentation;
};

inline QuotientBundle quotientAction(const VBSpace& e, const Subspace& sub) {
  if (!isInvariant(sub, e.action))
    throw InvarianceError("quotientAction: subspace is not action-invariant");
  QuotientBundle qb;
  qb.presentation = quotient(e.ambientDim, sub);
  qb.bundle = makeBundle(inducedAction(e.action, qb.presentation));
  return qb;
}

}  // namespace dvbsym
