#pragma once

#include <map>
#include <string>
#include <vector>

#include "action.hpp"

namespace dvbsym {

struct DVS {
  size_t ambientDim = 0;
  ScalingAction hAction;
  ScalingAction vAction;

  Subspace sideA() const { return image(hAction.projection(0)); }
  Subspace sideB() const { return image(vAction.projection(0)); }
  Subspace base() const { return image(hAction.projection(0) * vAction.projection(0)); }
  Subspace core() const { return image(hAction.projection(1) * vAction.projection(1)); }
  size_t coreRank() const { return core().rank(); }

  friend bool operator==(const DVS& a, const DVS& b) {
    return a.ambientDim == b.ambientDim && a.hAction == b.hAction && a.vAction == b.vAction;
  }
  friend bool operator!=(const DVS& a, const DVS& b) { return !(a == b); }
};

// Labeled coordinate blocks of a product space, each carrying its own actions.
struct Ambient {
  struct Block {
    std::string name;
    size_t offset = 0;
    size_t dim = 0;
  };
  std::vector<Block> blocks;
  std::vector<ScalingAction> actions;

  size_t dim() const { return blocks.empty() ? 0 : blocks.back().offset + blocks.back().dim; }
  bool has(const std::string& name) const {
    for (const auto& b : blocks)
      if (b.name == name) return true;
    return false;
  }
  const Block& block(const std::string& name) const {
    for (const auto& b : blocks)
      if (b.name == name) return b;
    throw DimensionError("no block named '" + name + "'");
  }
};

inline Ambient primitiveAmbient(const std::string& name, size_t dim,
                                std::vector<ScalingAction> actions) {
  for (const auto& a : actions)
    if (a.ambientDim != dim) throw DimensionError("primitiveAmbient: action size");
  Ambient amb;
  amb.blocks.push_back({name, 0, dim});
  amb.actions = std::move(actions);
  return amb;
}

inline Ambient concat(const Ambient& a, const Ambient& b) {
  if (a.actions.size() != b.actions.size())
    throw DimensionError("concat: different numbers of actions");
  Ambient r = a;
  size_t off = a.dim();
  for (auto blk : b.blocks) {
    if (a.has(blk.name)) throw DimensionError("concat: duplicate block '" + blk.name + "'");
    blk.offset += off;
    r.blocks.push_back(blk);
  }
  for (size_t k = 0; k < a.actions.size(); ++k) {
    std::map<unsigned, Matrix> ps;
    unsigned w = std::max(a.actions[k].maxWeight(), b.actions[k].maxWeight());
    for (unsigned i = 0; i <= w; ++i)
      ps.emplace(i, blockDiag({a.actions[k].projection(i), b.actions[k].projection(i)}));
    r.actions[k] = makeAction(r.dim(), ps);
  }
  return r;
}

// A space presented as S/K for subspaces K <= S of a labeled ambient, invariant
// under every ambient action. Intrinsic coordinates come with a lift (into S) and
// a coordinate map (defined on S, killing K).
struct Presented {
  Ambient amb;
  Subspace S, K;
  Matrix lift;   // ambient x dim
  Matrix coord;  // dim x ambient
  std::vector<ScalingAction> actions;

  size_t dim() const { return lift.cols(); }
  size_t numActions() const { return actions.size(); }
  const ScalingAction& action(size_t k) const { return actions.at(k); }

  VBSpace vb() const {
    if (actions.size() != 1) throw DimensionError("vb(): presented space has " + std::to_string(actions.size()) + " actions");
    return VBSpace{dim(), actions[0]};
  }
  DVS dvs() const {
    if (actions.size() != 2) throw DimensionError("dvs(): presented space has " + std::to_string(actions.size()) + " actions");
    return DVS{dim(), actions[0], actions[1]};
  }
  Matrix projection(size_t k, unsigned w) const { return actions.at(k).projection(w); }
  Matrix identity() const { return Matrix::identity(dim()); }
};

inline std::vector<ScalingAction> intrinsicActions(const Ambient& amb, const Matrix& lift,
                                                   const Matrix& coord) {
  std::vector<ScalingAction> acts;
  for (const auto& a : amb.actions) acts.push_back(restrictAction(a, lift, coord));
  return acts;
}

inline Presented present(Ambient amb, Subspace S, Subspace K) {
  if (!S.contains(K)) throw CompatibilityError("present: K is not inside S");
  for (const auto& a : amb.actions)
    if (!isInvariant(S, a) || !isInvariant(K, a))
      throw InvarianceError("present: subspace not invariant under an ambient action");
  Presented p;
  Matrix incS = S.inclusion(), retS = S.retraction();
  QuotientPresentation q = quotient(S.rank(), imageOf(retS, K));
  p.lift = incS * q.section;
  p.coord = q.projection * retS;
  p.actions = intrinsicActions(amb, p.lift, p.coord);
  p.amb = std::move(amb);
  p.S = std::move(S);
  p.K = std::move(K);
  return p;
}

inline Presented primitive(const std::string& name, size_t dim, std::vector<ScalingAction> acts) {
  Ambient amb = primitiveAmbient(name, dim, std::move(acts));
  Presented p;
  p.S = Subspace::full(dim);
  p.K = Subspace(dim);
  p.lift = Matrix::identity(dim);
  p.coord = Matrix::identity(dim);
  p.actions = amb.actions;
  p.amb = std::move(amb);
  return p;
}

inline Presented plainSpace(const std::string& name, size_t dim) { return primitive(name, dim, {}); }
inline Presented primitive(const std::string& name, const VBSpace& e) {
  return primitive(name, e.ambientDim, {e.action});
}
inline Presented primitive(const std::string& name, const DVS& d) {
  return primitive(name, d.ambientDim, {d.hAction, d.vAction});
}

inline Presented product(const Presented& x, const Presented& y) {
  Presented p;
  p.amb = concat(x.amb, y.amb);
  p.S = directSum(x.S, y.S);
  p.K = directSum(x.K, y.K);
  p.lift = blockDiag({x.lift, y.lift});
  p.coord = blockDiag({x.coord, y.coord});
  for (size_t k = 0; k < x.actions.size(); ++k) {
    std::map<unsigned, Matrix> ps;
    unsigned w = std::max(x.actions[k].maxWeight(), y.actions[k].maxWeight());
    for (unsigned i = 0; i <= w; ++i)
      ps.emplace(i, blockDiag({x.actions[k].projection(i), y.actions[k].projection(i)}));
    p.actions.push_back(makeAction(p.dim(), ps));
  }
  return p;
}

// sub-object given by an intrinsic subspace U
inline Presented restrictTo(const Presented& x, const Subspace& U) {
  if (U.ambientDim() != x.dim()) throw DimensionError("restrictTo: subspace of the wrong space");
  return present(x.amb, sum(x.K, imageOf(x.lift, U)), x.K);
}

inline Presented quotientBy(const Presented& x, const Subspace& U) {
  if (U.ambientDim() != x.dim()) throw DimensionError("quotientBy: subspace of the wrong space");
  return present(x.amb, x.S, sum(x.K, imageOf(x.lift, U)));
}

// Matrix of the map X -> Y induced by an ambient map F.
inline Matrix induced(const Matrix& F, const Presented& x, const Presented& y) {
  if (F.cols() != x.amb.dim() || F.rows() != y.amb.dim())
    throw DimensionError("induced: ambient map " + F.shape());
  if (!y.S.contains(F * x.S.inclusion()))
    throw CompatibilityError("induced: ambient map does not carry S into S");
  if (!y.K.contains(F * x.K.inclusion()))
    throw CompatibilityError("induced: ambient map does not carry K into K");
  return y.coord * F * x.lift;
}

// Tangent functor: ambient (e, e') with a new first action of weight 1 on e'.
// The copy's blocks are named "<name>.<tag>"; intrinsic coordinates double.
inline Presented tangent(const Presented& x, const std::string& tag) {
  Presented t;
  const size_t n = x.amb.dim();
  t.amb.blocks = x.amb.blocks;
  for (auto b : x.amb.blocks) {
    b.name += "." + tag;
    b.offset += n;
    t.amb.blocks.push_back(b);
  }
  auto doubled = [](const ScalingAction& a) {
    std::map<unsigned, Matrix> ps;
    for (const auto& [k, p] : a.weightProjections) ps.emplace(k, blockDiag({p, p}));
    return makeAction(2 * a.ambientDim, ps);
  };
  auto tangentWeights = [](size_t m) {
    return makeAction(2 * m, {{0, blockDiag({Matrix::identity(m), Matrix(m, m)})},
                              {1, blockDiag({Matrix(m, m), Matrix::identity(m)})}});
  };
  t.amb.actions.push_back(tangentWeights(n));
  for (const auto& a : x.amb.actions) t.amb.actions.push_back(doubled(a));
  t.S = directSum(x.S, x.S);
  t.K = directSum(x.K, x.K);
  t.lift = blockDiag({x.lift, x.lift});
  t.coord = blockDiag({x.coord, x.coord});
  t.actions.push_back(tangentWeights(x.dim()));
  for (const auto& a : x.actions) t.actions.push_back(doubled(a));
  return t;
}

inline Presented insertTrivialAction(const Presented& x, size_t index) {
  Presented p = x;
  p.amb.actions.insert(p.amb.actions.begin() + index, trivialAction(x.amb.dim()));
  p.actions.insert(p.actions.begin() + index, trivialAction(x.dim()));
  return p;
}

inline Presented swapActions(const Presented& x) {
  Presented p = x;
  std::swap(p.amb.actions[0], p.amb.actions[1]);
  std::swap(p.actions[0], p.actions[1]);
  return p;
}

// E^h = (trivial, delta) and E^v = (delta, trivial) for a bundle E
inline Presented liftH(const Presented& e) { return insertTrivialAction(e, 0); }
inline Presented liftV(const Presented& e) { return insertTrivialAction(e, 1); }
inline Presented asBundle(const Presented& m) { return insertTrivialAction(m, 0); }

struct PresentedFiberProduct {
  Presented P;
  Matrix pr1, pr2;       // intrinsic projections to the two factors
  Matrix liftX, liftY;   // the factors' lifts, for factoring cones

  // the unique map into P through which the cone (u, v) factors
  Matrix factor(const Matrix& u, const Matrix& v) const {
    Matrix rep = vstack({liftX * u, liftY * v});
    if (!P.S.contains(rep)) throw CompatibilityError("factor: cone does not commute");
    return P.coord * rep;
  }
};

// X x_Z Y for intrinsic maps f: X -> Z, g: Y -> Z
inline PresentedFiberProduct fiberProduct(const Presented& x, const Matrix& f, const Presented& y,
                                          const Matrix& g) {
  if (f.cols() != x.dim() || g.cols() != y.dim() || f.rows() != g.rows())
    throw DimensionError("fiberProduct: cospan shapes " + f.shape() + ", " + g.shape());
  Presented w = product(x, y);
  PresentedFiberProduct fp;
  fp.P = restrictTo(w, kernel(hstack({f, -g})));
  Matrix toX = hstack({Matrix::identity(x.amb.dim()), Matrix(x.amb.dim(), y.amb.dim())});
  Matrix toY = hstack({Matrix(y.amb.dim(), x.amb.dim()), Matrix::identity(y.amb.dim())});
  fp.pr1 = x.coord * toX * fp.P.lift;
  fp.pr2 = y.coord * toY * fp.P.lift;
  fp.liftX = x.lift;
  fp.liftY = y.lift;
  return fp;
}

struct BlockArrow {
  std::string from, to;
  Matrix map;  // empty means identity
};

inline Matrix blockMap(const Ambient& src, const Ambient& tgt, const std::vector<BlockArrow>& arrows) {
  Matrix F(tgt.dim(), src.dim());
  for (const auto& a : arrows) {
    const auto& s = src.block(a.from);
    const auto& t = tgt.block(a.to);
    Matrix m = a.map.rows() == 0 && a.map.cols() == 0 ? Matrix::identity(s.dim) : a.map;
    if (m.rows() != t.dim || m.cols() != s.dim)
      throw DimensionError("blockMap " + a.from + " -> " + a.to + ": " + m.shape());
    for (size_t i = 0; i < m.rows(); ++i)
      for (size_t j = 0; j < m.cols(); ++j)
        if (sgn(m(i, j)) != 0) F(t.offset + i, s.offset + j) += m(i, j);
  }
  return F;
}

// Identity on equally named blocks after applying `renames`; unmatched source
// blocks are an error unless dropping is allowed.
inline Matrix renaming(const Ambient& src, const Ambient& tgt,
                       const std::map<std::string, std::string>& renames = {},
                       bool allowDrop = false) {
  std::vector<BlockArrow> arrows;
  for (const auto& b : src.blocks) {
    auto it = renames.find(b.name);
    std::string to = it == renames.end() ? b.name : it->second;
    if (!tgt.has(to)) {
      if (allowDrop) continue;
      throw DimensionError("renaming: target has no block '" + to + "'");
    }
    arrows.push_back({b.name, to, {}});
  }
  return blockMap(src, tgt, arrows);
}

}  // namespace dvbsym
