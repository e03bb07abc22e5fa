#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "presented.hpp"

namespace dvbsym {

inline bool actionsCommute(const ScalingAction& a, const ScalingAction& b) {
  for (const auto& [k, p] : a.weightProjections)
    for (const auto& [l, q] : b.weightProjections)
      if (p * q != q * p) return false;
  return true;
}

inline bool isValidDVS(const DVS& d) {
  return isValidBundle({d.ambientDim, d.hAction}) && isValidBundle({d.ambientDim, d.vAction}) &&
         actionsCommute(d.hAction, d.vAction);
}

// base, A-fiber, B-fiber, core: h0v0, h0v1, h1v0, h1v1
inline std::vector<Matrix> gradedPieces(const DVS& d) {
  const auto& h = d.hAction;
  const auto& v = d.vAction;
  return {h.projection(0) * v.projection(0), h.projection(0) * v.projection(1),
          h.projection(1) * v.projection(0), h.projection(1) * v.projection(1)};
}

inline bool piecesComplete(const DVS& d) {
  auto ps = gradedPieces(d);
  Matrix total(d.ambientDim, d.ambientDim);
  for (size_t i = 0; i < ps.size(); ++i) {
    if (ps[i] * ps[i] != ps[i]) return false;
    for (size_t j = 0; j < ps.size(); ++j)
      if (i != j && !(ps[i] * ps[j]).isZero()) return false;
    total = total + ps[i];
  }
  return d.ambientDim == 0 || total.isIdentity();
}

struct DVBMap {
  DVS source, target;
  Matrix map;
};

inline bool isDVBMap(const DVS& s, const DVS& t, const Matrix& f) {
  return isEquivariant(f, s.hAction, t.hAction) && isEquivariant(f, s.vAction, t.vAction);
}
inline bool isDVBMap(const DVBMap& m) { return isDVBMap(m.source, m.target, m.map); }

enum class FlipKind { Total, Partial, IdentityReinterpretation };

struct FlipMap {
  DVS source, target;
  Matrix map;
  FlipKind kind = FlipKind::Total;
  std::vector<bool> mask;  // flipped factors, for partial flips of products
};

// h of the source goes to v of the target and vice versa
inline bool isFlipMap(const DVS& s, const DVS& t, const Matrix& f) {
  return isEquivariant(f, s.hAction, t.vAction) && isEquivariant(f, s.vAction, t.hAction);
}
inline bool isFlipMap(const FlipMap& m) { return isFlipMap(m.source, m.target, m.map); }

inline bool isFlipMapAt(const FlipMap& m, const std::vector<Rational>& lambdas) {
  return isEquivariantAt(m.map, m.source.hAction, m.target.vAction, lambdas) &&
         isEquivariantAt(m.map, m.source.vAction, m.target.hAction, lambdas);
}

inline FlipMap compose(const DVBMap& g, const FlipMap& f) {
  return {f.source, g.target, g.map * f.map, f.kind, f.mask};
}
inline FlipMap compose(const FlipMap& g, const DVBMap& f) {
  return {f.source, g.target, g.map * f.map, g.kind, g.mask};
}
inline DVBMap compose(const DVBMap& g, const DVBMap& f) { return {f.source, g.target, g.map * f.map}; }
// two flips compose to a non-flipping map
inline DVBMap compose(const FlipMap& g, const FlipMap& f) { return {f.source, g.target, g.map * f.map}; }

inline FlipMap inverse(const FlipMap& f) { return {f.target, f.source, inverse(f.map), f.kind, f.mask}; }

inline DVS flipTotal(const DVS& d) { return {d.ambientDim, d.vAction, d.hAction}; }
inline DVBMap flipOfMap(const DVBMap& m) { return {flipTotal(m.source), flipTotal(m.target), m.map}; }
inline FlipMap totalFlip(const DVS& d) {
  return {d, flipTotal(d), Matrix::identity(d.ambientDim), FlipKind::Total, {}};
}

inline DVS hLift(const VBSpace& e) { return {e.ambientDim, trivialAction(e.ambientDim), e.action}; }
inline DVS vLift(const VBSpace& e) { return {e.ambientDim, e.action, trivialAction(e.ambientDim)}; }
inline DVBMap liftMapH(const Matrix& phi, const VBSpace& e1, const VBSpace& e2) {
  return {hLift(e1), hLift(e2), phi};
}
inline DVBMap liftMapV(const Matrix& phi, const VBSpace& e1, const VBSpace& e2) {
  return {vLift(e1), vLift(e2), phi};
}

// A side as a bundle in RREF coordinates, with its inclusion into the DVS.
struct SideBundle {
  VBSpace bundle;
  Matrix inclusion;
  Matrix retraction;
};

inline SideBundle sideBundleA(const DVS& d) {
  Subspace a = d.sideA();
  return {makeBundle(restrictAction(d.vAction, a.inclusion(), a.retraction())), a.inclusion(),
          a.retraction()};
}
inline SideBundle sideBundleB(const DVS& d) {
  Subspace b = d.sideB();
  return {makeBundle(restrictAction(d.hAction, b.inclusion(), b.retraction())), b.inclusion(),
          b.retraction()};
}

// underline-pi^h : D -> A^h and underline-pi^v : D -> B^v
inline std::pair<DVBMap, DVBMap> canonicalSurmersions(const DVS& d) {
  SideBundle a = sideBundleA(d), b = sideBundleB(d);
  DVBMap ph{d, hLift(a.bundle), a.retraction * d.hAction.projection(0)};
  DVBMap pv{d, vLift(b.bundle), b.retraction * d.vAction.projection(0)};
  return {ph, pv};
}

// --- fiber products and side pullbacks on presented spaces --------------------

inline PresentedFiberProduct fiberProductDVB(const Presented& d1, const Matrix& f1,
                                             const Presented& d2, const Matrix& f2,
                                             const Presented& d) {
  if (!isDVBMap(d1.dvs(), d.dvs(), f1) || !isDVBMap(d2.dvs(), d.dvs(), f2))
    throw CompatibilityError("fiberProductDVB: cospan legs are not dvb-maps");
  return fiberProduct(d1, f1, d2, f2);
}

enum class Orientation { Horizontal, Vertical };

inline Orientation other(Orientation o) {
  return o == Orientation::Horizontal ? Orientation::Vertical : Orientation::Horizontal;
}

// Side pullback of D along phi: E -> D, where phi lands in side A (horizontal)
// or side B (vertical). Carrier E x D inside E^h x D (resp. E^v x D).
inline PresentedFiberProduct sidePullback(const Presented& e, const Matrix& phi, const Presented& d,
                                          Orientation o) {
  const size_t k = o == Orientation::Horizontal ? 0 : 1;
  Matrix p0 = d.projection(k, 0);
  if (p0 * phi != phi)
    throw CompatibilityError("sidePullback: map does not land in the side bundle");
  Presented lifted = o == Orientation::Horizontal ? liftH(e) : liftV(e);
  auto fp = fiberProduct(lifted, phi, d, p0);
  if (!isEquivariant(phi, lifted.action(1 - k), d.action(1 - k)))
    throw CompatibilityError("sidePullback: map is not a vb-map into the side");
  return fp;
}

inline PresentedFiberProduct sidePullbackH(const Presented& e, const Matrix& phi, const Presented& d) {
  return sidePullback(e, phi, d, Orientation::Horizontal);
}
inline PresentedFiberProduct sidePullbackV(const Presented& e, const Matrix& phi, const Presented& d) {
  return sidePullback(e, phi, d, Orientation::Vertical);
}

// (e, x) -> (gamma e, phi x) between side pullbacks
inline Matrix sidePullbackMap(const PresentedFiberProduct& src, const PresentedFiberProduct& tgt,
                              const Matrix& gamma, const Matrix& phi) {
  return tgt.factor(gamma * src.pr1, phi * src.pr2);
}

// Sharpening (pi, phi): D1 -> alpha^{*,h} D2 with alpha = phi on the side of D1.
// `side` is that side as a bundle, `proj` the projection D1 -> side.
struct Sharpening {
  PresentedFiberProduct target;
  Matrix map;
};

inline Sharpening sharpen(const Presented& d1, const Matrix& phi, const Presented& d2,
                          const Presented& side, const Matrix& inc, const Matrix& proj,
                          Orientation o) {
  if (!isDVBMap(d1.dvs(), d2.dvs(), phi)) throw CompatibilityError("sharpen: not a dvb-map");
  Sharpening s;
  s.target = sidePullback(side, phi * inc, d2, o);
  s.map = s.target.factor(proj, phi);
  return s;
}

inline Sharpening sharpen(const Presented& d1, const Matrix& phi, const Presented& d2, Orientation o) {
  const size_t k = o == Orientation::Horizontal ? 0 : 1;
  Presented a = restrictTo(d1, image(d1.projection(k, 0)));
  a.actions.erase(a.actions.begin() + k);
  a.amb.actions.erase(a.amb.actions.begin() + k);
  Matrix inc = d1.coord * a.lift, ret = a.coord * d1.lift;
  return sharpen(d1, phi, d2, a, inc, ret * d1.projection(k, 0), o);
}

// --- vb-objects ---------------------------------------------------------------

struct VBObject {
  VBSpace carrier;   // (D, kappa)
  VBSpace embedded;  // (E, delta)
  Matrix j;          // E -> D
  ScalingAction tau;
  Orientation orientation = Orientation::Horizontal;
};

// empty when all conditions hold, else the label of the first failing one
inline std::optional<std::string> vbObjectViolation(const VBObject& o) {
  const auto& kappa = o.carrier.action;
  if (!isValidBundle(o.carrier) || !isValidBundle(o.embedded)) return "i";
  if (!isInjective(o.j) || !isEquivariant(o.j, o.embedded.action, kappa)) return "ii";
  if (!actionsCommute(o.tau, kappa) || o.tau.maxWeight() > 1 || !isValidAction(o.tau)) return "iii";
  if (image(o.tau.projection(0)) != image(o.j)) return "iv";
  if (o.tau.projection(0) * o.j != o.j) return "v";
  return std::nullopt;
}

inline VBObject vbObjectFromDVS(const DVS& d, Orientation o) {
  VBObject ob;
  ob.orientation = o;
  if (o == Orientation::Horizontal) {
    SideBundle a = sideBundleA(d);
    ob.carrier = {d.ambientDim, d.vAction};
    ob.embedded = a.bundle;
    ob.j = a.inclusion;
    ob.tau = d.hAction;
  } else {
    SideBundle b = sideBundleB(d);
    ob.carrier = {d.ambientDim, d.hAction};
    ob.embedded = b.bundle;
    ob.j = b.inclusion;
    ob.tau = d.vAction;
  }
  return ob;
}

inline DVS dvsFromVBObject(const VBObject& o) {
  if (auto bad = vbObjectViolation(o)) throw CompatibilityError("vb-object condition " + *bad + " fails");
  if (o.orientation == Orientation::Horizontal) return {o.carrier.ambientDim, o.tau, o.carrier.action};
  return {o.carrier.ambientDim, o.carrier.action, o.tau};
}

// --- quotients -------------------------------------------------------------------

struct PresentedQuotient {
  Presented X;
  Matrix quot;  // D -> X
};

// Horizontal quotient D/_h Q of a wide embedding iota: Q -> D in VB^h(E -> M):
// iota must be a dvb-map, injective, and an isomorphism on side A.
inline PresentedQuotient quotientOf(const Presented& d, const Matrix& iota, const Presented& q,
                                    Orientation o) {
  const size_t k = o == Orientation::Horizontal ? 0 : 1;
  if (!isDVBMap(q.dvs(), d.dvs(), iota)) throw CompatibilityError("quotient: embedding is not a dvb-map");
  if (!isInjective(iota)) throw CompatibilityError("quotient: embedding is not injective");
  Subspace sideQ = image(q.projection(k, 0)), sideD = image(d.projection(k, 0));
  if (imageOf(iota, sideQ) != sideD) throw CompatibilityError("quotient: embedding is not wide");
  PresentedQuotient r;
  r.X = quotientBy(d, image(iota * q.projection(k, 1)));
  r.quot = r.X.coord * d.lift;
  return r;
}

inline PresentedQuotient quotientH(const Presented& d, const Matrix& iota, const Presented& q) {
  return quotientOf(d, iota, q, Orientation::Horizontal);
}
inline PresentedQuotient quotientV(const Presented& d, const Matrix& iota, const Presented& q) {
  return quotientOf(d, iota, q, Orientation::Vertical);
}

// the unique g' with g' q1 = q2 g, for surjective q1, q2
inline Matrix descend(const Matrix& g, const Matrix& q1, const Matrix& q2) {
  if (!(q2 * g * kernel(q1).inclusion()).isZero())
    throw CompatibilityError("descend: map does not kill the quotiented subspace");
  Matrix s1 = solve(q1, Matrix::identity(q1.rows()));
  return q2 * g * s1;
}

// quotient of a 2-dvb-map (phi, psi): iota1 => iota2
inline Matrix quotientDVBMap(const Matrix& phi, const Matrix& psi, const Matrix& iota1,
                             const Matrix& iota2, const PresentedQuotient& q1,
                             const PresentedQuotient& q2) {
  if (phi * iota1 != iota2 * psi) throw CompatibilityError("quotientDVBMap: square does not commute");
  return descend(phi, q1.quot, q2.quot);
}

// flipD / flipQ from D1/_v Q1 (iota1 vertical) to D2/_h Q2 (iota2 horizontal), or
// the transposed situation; only the commuting square is needed.
inline Matrix quotientFlip(const Matrix& flipD, const Matrix& flipQ, const Matrix& iota1,
                           const Matrix& iota2, const PresentedQuotient& q1,
                           const PresentedQuotient& q2) {
  if (flipD * iota1 != iota2 * flipQ) throw CompatibilityError("quotientFlip: square does not commute");
  Matrix r = descend(flipD, q1.quot, q2.quot);
  if (!isFlipMap(q1.X.dvs(), q2.X.dvs(), r)) throw CompatibilityError("quotientFlip: result is not a flip");
  return r;
}

// Pullback of a flip Upsilon: D1 => D2 along psi: E -> F, where F is side `o` of D1
// and the other side of D2. psi1, psi2 are psi followed by the side inclusions.
struct PullbackFlip {
  PresentedFiberProduct source, target;
  Matrix map;
};

inline PullbackFlip pullbackFlip(const Presented& e, const Matrix& psi1, const Presented& d1,
                                 const Matrix& psi2, const Presented& d2, const Matrix& upsilon,
                                 Orientation o) {
  if (upsilon * psi1 != psi2) throw CompatibilityError("pullbackFlip: flip does not fix the pulled-back side");
  if (!isFlipMap(d1.dvs(), d2.dvs(), upsilon)) throw CompatibilityError("pullbackFlip: not a flip map");
  PullbackFlip pf;
  pf.source = sidePullback(e, psi1, d1, o);
  pf.target = sidePullback(e, psi2, d2, other(o));
  pf.map = pf.target.factor(pf.source.pr1, upsilon * pf.source.pr2);
  return pf;
}

// (phi/psi)^{*,v}(D/_h Q) = (phi^{*,v} D)/_h (psi^{*,v} Q), and its transpose.
// k: V -> U wide vb-embedding, iota: Q -> D horizontal embedding (vertical when
// o is Vertical), phi: U -> D into the other side, psi: V -> Q likewise.
struct PullbackQuotientIso {
  PresentedQuotient lhs;       // quotient of the side pullbacks
  PresentedFiberProduct rhs;   // side pullback of the quotient
  PresentedQuotient dq;        // D/Q
  Presented uv;                // U/V
  Matrix iso;                  // lhs.X -> rhs.P
};

inline PullbackQuotientIso pullbackQuotientIso(const Presented& u, const Presented& v, const Matrix& k,
                                               const Presented& d, const Presented& q,
                                               const Matrix& iota, const Matrix& phi,
                                               const Matrix& psi, Orientation o) {
  if (phi * k != iota * psi) throw CompatibilityError("pullbackQuotientIso: square does not commute");
  Orientation po = other(o);
  PullbackQuotientIso r;
  auto pd = sidePullback(u, phi, d, po);
  auto pq = sidePullback(v, psi, q, po);
  Matrix restricted = sidePullbackMap(pq, pd, k, iota);
  r.lhs = quotientOf(pd.P, restricted, pq.P, o);
  r.dq = quotientOf(d, iota, q, o);
  r.uv = quotientBy(u, image(k * v.projection(0, 1)));
  Matrix qU = r.uv.coord * u.lift;
  Matrix phiBar = descend(r.dq.quot * phi, qU, Matrix::identity(r.dq.X.dim()));
  r.rhs = sidePullback(r.uv, phiBar, r.dq.X, po);
  Matrix toRhs = r.rhs.factor(qU * pd.pr1, r.dq.quot * pd.pr2);
  r.iso = descend(toRhs, r.lhs.quot, Matrix::identity(r.rhs.P.dim()));
  return r;
}

}  // namespace dvbsym
