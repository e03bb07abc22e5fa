#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dvs.hpp"

namespace dvbsym {

// --- matrix-level tangent functor ------------------------------------------------

inline VBSpace tangentSpace(size_t n) { return tangentBundle(n); }

inline Matrix tangentMap(const Matrix& f) { return blockDiag({f, f}); }

// TTV in coordinates (x, a, b, w): h has weight 1 on a and w, v on b and w.
inline DVS doubleTangent(size_t n) {
  std::vector<unsigned> h, v;
  for (unsigned part = 0; part < 4; ++part)
    for (size_t i = 0; i < n; ++i) {
      h.push_back(part == 1 || part == 3);
      v.push_back(part >= 2);
    }
  return {4 * n, diagonalAction(h), diagonalAction(v)};
}

// TE = E (+) E' with h the tangent weight and v the doubled bundle action
inline DVS tangentOfBundle(const VBSpace& e) {
  const size_t n = e.ambientDim;
  ScalingAction h = makeAction(2 * n, {{0, blockDiag({Matrix::identity(n), Matrix(n, n)})},
                                       {1, blockDiag({Matrix(n, n), Matrix::identity(n)})}});
  std::map<unsigned, Matrix> ps;
  for (const auto& [k, p] : e.action.weightProjections) ps.emplace(k, blockDiag({p, p}));
  return {2 * n, h, makeAction(2 * n, ps)};
}

inline DVBMap tangentOfVBMap(const VBSpace& e1, const VBSpace& e2, const Matrix& phi) {
  if (!isEquivariant(phi, e1.action, e2.action)) throw CompatibilityError("tangentOfVBMap: not a vb-map");
  return {tangentOfBundle(e1), tangentOfBundle(e2), tangentMap(phi)};
}

// --- 2-maps ------------------------------------------------------------------------

enum class Direction { Horizontal, Vertical };

// right * top = bottom * left
struct TwoMap {
  Matrix top, bottom, left, right;
  Direction direction = Direction::Horizontal;
};

inline bool commutes(const TwoMap& f) {
  if (f.top.cols() != f.left.cols() || f.right.cols() != f.top.rows() ||
      f.bottom.cols() != f.left.rows() || f.right.rows() != f.bottom.rows())
    throw DimensionError("TwoMap: edges do not form a square");
  return f.right * f.top == f.bottom * f.left;
}

// G o F: F's right edge is G's left edge
inline TwoMap hCompose(const TwoMap& g, const TwoMap& f) {
  if (f.right != g.left) throw CompatibilityError("hCompose: shared edge differs");
  return {g.top * f.top, g.bottom * f.bottom, f.left, g.right, f.direction};
}

// K . H: H's bottom edge is K's top edge
inline TwoMap vCompose(const TwoMap& k, const TwoMap& h) {
  if (h.bottom != k.top) throw CompatibilityError("vCompose: shared edge differs");
  return {h.top, k.bottom, k.left * h.left, k.right * h.right, h.direction};
}

inline TwoMap transpose(const TwoMap& f) {
  return {f.left, f.right, f.top, f.bottom,
          f.direction == Direction::Horizontal ? Direction::Vertical : Direction::Horizontal};
}

// --- bundles with an explicit base --------------------------------------------------

// A vector bundle E -> M in the presented engine together with its zero section
// and projection, in intrinsic coordinates.
struct BundleOver {
  Presented E, M;
  Matrix zero;  // M -> E
  Matrix proj;  // E -> M
};

inline BundleOver tangentBundleOver(const Presented& m, const std::string& tag = "u") {
  BundleOver b;
  b.M = m;
  b.E = tangent(m, tag);
  const size_t n = m.dim();
  b.zero = vstack({Matrix::identity(n), Matrix(n, n)});
  b.proj = hstack({Matrix::identity(n), Matrix(n, n)});
  return b;
}

struct PulledBundle {
  BundleOver bundle;
  PresentedFiberProduct carrier;  // P x_M E
};

// h^*E for h: P -> M
inline PulledBundle pullbackBundle(const BundleOver& b, const Presented& p, const Matrix& h) {
  if (h.cols() != p.dim() || h.rows() != b.M.dim()) throw DimensionError("pullbackBundle: " + h.shape());
  PulledBundle r;
  r.carrier = fiberProduct(asBundle(p), b.zero * h, b.E, b.E.projection(0, 0));
  r.bundle.E = r.carrier.P;
  r.bundle.M = p;
  r.bundle.zero = r.carrier.factor(Matrix::identity(p.dim()), b.zero * h);
  r.bundle.proj = r.carrier.pr1;
  return r;
}

// H: g => f as a square (left g, right f, top h1, bottom h2); phi: E1 -> E2 covers f.
struct PulledVBMap {
  PulledBundle source, target;
  Matrix map;
};

inline PulledVBMap pullbackVBMapBy2Map(const TwoMap& H, const BundleOver& e1, const BundleOver& e2,
                                       const Matrix& phi, const Presented& p1, const Presented& p2) {
  if (!commutes(H)) throw CompatibilityError("pullbackVBMapBy2Map: square does not commute");
  if (e2.proj * phi != H.right * e1.proj)
    throw CompatibilityError("pullbackVBMapBy2Map: vb-map does not cover the right edge");
  PulledVBMap r;
  r.source = pullbackBundle(e1, p1, H.top);
  r.target = pullbackBundle(e2, p2, H.bottom);
  r.map = r.target.carrier.factor(H.left * r.source.carrier.pr1, phi * r.source.carrier.pr2);
  return r;
}

// k^*(h^*E) -> (h k)^*E
inline Matrix pullbackCompositeIso(const PulledBundle& outer, const PulledBundle& inner,
                                   const PulledBundle& composite) {
  return composite.carrier.factor(outer.carrier.pr1, inner.carrier.pr2 * outer.carrier.pr2);
}

// --- sharp differential and normal bundle ----------------------------------------------

struct NormalBundle {
  Presented M, N, TM, TN;
  Matrix j;
  PresentedFiberProduct pull;  // j^*TN
  Matrix sharp;                // TM -> j^*TN
  Presented nu;
  Matrix quot;                 // j^*TN -> nu
  Matrix zero;                 // M -> nu
  Matrix proj;                 // nu -> M

  BundleOver bundle() const { return {nu, M, zero, proj}; }
  size_t fiberRank() const { return nu.dim() - M.dim(); }
};

// (x, u) -> (x, f u) into f^*TN
inline Matrix sharpDifferential(const Presented& m, const Presented& n, const Matrix& f,
                                PresentedFiberProduct* pullOut = nullptr) {
  if (f.cols() != m.dim() || f.rows() != n.dim()) throw DimensionError("sharpDifferential: " + f.shape());
  Presented tn = tangent(n, "u");
  auto pull = fiberProduct(asBundle(m), vstack({f, Matrix(n.dim(), m.dim())}), tn, tn.projection(0, 0));
  Matrix sharp = pull.factor(hstack({Matrix::identity(m.dim()), Matrix(m.dim(), m.dim())}), tangentMap(f));
  if (pullOut) *pullOut = pull;
  return sharp;
}

inline Matrix sharpDifferential(const Matrix& f) {
  return sharpDifferential(plainSpace("M", f.cols()), plainSpace("N", f.rows()), f);
}

inline NormalBundle normalBundle(const Presented& m, const Presented& n, const Matrix& j) {
  if (!isInjective(j)) throw ImmersionError("normalBundle: map is not injective");
  NormalBundle nb;
  nb.M = m;
  nb.N = n;
  nb.j = j;
  nb.TM = tangent(m, "u");
  nb.TN = tangent(n, "u");
  nb.sharp = sharpDifferential(m, n, j, &nb.pull);
  nb.nu = quotientBy(nb.pull.P, image(nb.sharp * nb.TM.projection(0, 1)));
  nb.quot = nb.nu.coord * nb.pull.P.lift;
  nb.zero = nb.quot * nb.pull.factor(Matrix::identity(m.dim()), vstack({j, Matrix(n.dim(), m.dim())}));
  nb.proj = descend(nb.pull.pr1, nb.quot, Matrix::identity(m.dim()));
  return nb;
}

inline VBSpace normalBundle(const Matrix& j) {
  return normalBundle(plainSpace("M", j.cols()), plainSpace("N", j.rows()), j).nu.vb();
}

// nu^(2)(F) for F: left => right; n1 is nu(left), n2 is nu(right)
inline Matrix normalDifferential(const TwoMap& f, const NormalBundle& n1, const NormalBundle& n2) {
  if (f.left != n1.j || f.right != n2.j) throw CompatibilityError("normalDifferential: edges do not match the bundles");
  if (!commutes(f)) throw CompatibilityError("normalDifferential: square does not commute");
  Matrix g = n2.pull.factor(f.top * n1.pull.pr1, tangentMap(f.bottom) * n1.pull.pr2);
  return descend(g, n1.quot, n2.quot);
}

// --- vb-normal bundles -------------------------------------------------------------------

inline bool isVBImmersion(const Presented& e, const Presented& f, const Matrix& phi) {
  if (!isEquivariant(phi, e.action(0), f.action(0)) || !isInjective(phi)) return false;
  return isInjective(phi * image(e.projection(0, 0)).inclusion());
}

struct VBNormal {
  Presented E, F, TE, TF;
  Matrix phi;
  PresentedFiberProduct pull;  // phi^{*,h} TF
  Matrix sharp;                // TE -> phi^{*,h} TF
  PresentedQuotient quotient;  // nu(phi) = pull /_h TE

  const Presented& X() const { return quotient.X; }
  DVS dvs() const { return quotient.X.dvs(); }
};

inline VBNormal vbNormal(const Presented& e, const Presented& f, const Matrix& phi) {
  if (!isVBImmersion(e, f, phi)) throw ImmersionError("vbNormal: not a vb-immersion");
  VBNormal r;
  r.E = e;
  r.F = f;
  r.phi = phi;
  r.TE = tangent(e, "t");
  r.TF = tangent(f, "t");
  r.pull = sidePullbackH(e, vstack({phi, Matrix(f.dim(), e.dim())}), r.TF);
  r.sharp = r.pull.factor(hstack({Matrix::identity(e.dim()), Matrix(e.dim(), e.dim())}), tangentMap(phi));
  r.quotient = quotientOf(r.pull.P, r.sharp, r.TE, Orientation::Horizontal);
  return r;
}

// nu(phi1) -> nu(phi2) for a 2-map of vb-immersions: phi2 psi = Phi phi1
inline Matrix vbNormalDifferential(const VBNormal& n1, const VBNormal& n2, const Matrix& psi,
                                   const Matrix& Phi) {
  if (n2.phi * psi != Phi * n1.phi) throw CompatibilityError("vbNormalDifferential: square does not commute");
  return descend(sidePullbackMap(n1.pull, n2.pull, psi, tangentMap(Phi)), n1.quotient.quot, n2.quotient.quot);
}

// --- the flips Phi, kappa and Upsilon ---------------------------------------------------------

// kappa_M on TTM = tangent(tangent(M, "u"), "t"): exchanges the two tangent directions
inline Matrix kappa(const Presented& ttm, const std::string& m) {
  return induced(renaming(ttm.amb, ttm.amb, {{m + ".u", m + ".t"}, {m + ".t", m + ".u"}}), ttm, ttm);
}

struct PhiFlip {
  VBNormal normal;     // nu(f_*), whose pullback is the source (f_*)^{*,h} TTN
  NormalBundle sharp;  // f^*TN, with f_sharp
  Presented target;    // T(f^*TN)
  Matrix map;
  Matrix starSharp;    // f_{* sharp}: TTM -> (f_*)^{*,h} TTN
  Matrix sharpStar;    // f_{sharp *}: TTM -> T(f^*TN)
  Matrix kappaM;
};

// Phi_f for f: M -> N. Immersion data is only needed when f is injective; for
// other f the normal quotient is skipped.
inline PhiFlip phiFlip(const Presented& m, const Presented& n, const Matrix& f) {
  PhiFlip r;
  const std::string M = m.amb.blocks.at(0).name, N = n.amb.blocks.at(0).name;
  Presented tm = tangent(m, "u"), tn = tangent(n, "u");
  r.normal.E = tm;
  r.normal.F = tn;
  r.normal.phi = tangentMap(f);
  r.normal.TE = tangent(tm, "t");
  r.normal.TF = tangent(tn, "t");
  r.normal.pull = sidePullbackH(tm, vstack({r.normal.phi, Matrix(tn.dim(), tm.dim())}), r.normal.TF);
  r.normal.sharp = r.normal.pull.factor(hstack({Matrix::identity(tm.dim()), Matrix(tm.dim(), tm.dim())}),
                                        tangentMap(r.normal.phi));
  if (isInjective(f))
    r.normal.quotient = quotientOf(r.normal.pull.P, r.normal.sharp, r.normal.TE, Orientation::Horizontal);
  r.sharp.M = m;
  r.sharp.N = n;
  r.sharp.j = f;
  r.sharp.TM = tm;
  r.sharp.TN = tn;
  r.sharp.sharp = sharpDifferential(m, n, f, &r.sharp.pull);
  r.target = tangent(r.sharp.pull.P, "t");
  const Presented& src = r.normal.pull.P;
  Matrix F = renaming(src.amb, r.target.amb, {{M + ".u", M + ".t"}, {N + ".u", N + ".t"}, {N + ".t", N + ".u"}});
  r.map = induced(F, src, r.target);
  r.starSharp = r.normal.sharp;
  r.sharpStar = tangentMap(r.sharp.sharp);
  r.kappaM = kappa(r.normal.TE, M);
  return r;
}

inline FlipMap Phi(const Matrix& f) {
  PhiFlip p = phiFlip(plainSpace("M", f.cols()), plainSpace("N", f.rows()), f);
  return {p.normal.pull.P.dvs(), p.target.dvs(), p.map, FlipKind::Total, {}};
}

// TE /_v TF ~ T(E/F) for a wide vb-embedding iota: F -> E
struct QuotientTangent {
  Presented TE, TF, EF, TEF;
  PresentedQuotient quotient;  // TE /_v TF
  Matrix q;                    // E -> E/F
  Matrix iso;                  // quotient.X -> T(E/F)
};

inline QuotientTangent quotientTangent(const Presented& e, const Presented& f, const Matrix& iota,
                                       const std::string& tag = "t") {
  if (!isEquivariant(iota, f.action(0), e.action(0)) || !isInjective(iota))
    throw CompatibilityError("quotientTangent: not a vb-embedding");
  if (imageOf(iota, image(f.projection(0, 0))) != image(e.projection(0, 0)))
    throw CompatibilityError("quotientTangent: embedding is not wide");
  QuotientTangent r;
  r.TE = tangent(e, tag);
  r.TF = tangent(f, tag);
  r.quotient = quotientOf(r.TE, tangentMap(iota), r.TF, Orientation::Vertical);
  r.EF = quotientBy(e, image(iota * f.projection(0, 1)));
  r.q = r.EF.coord * e.lift;
  r.TEF = tangent(r.EF, tag);
  r.iso = descend(tangentMap(r.q), r.quotient.quot, Matrix::identity(r.TEF.dim()));
  return r;
}

// (phi/psi)_* against Tphi/Tpsi: iso2 (Tphi/Tpsi) = T(phi/psi) iso1
inline bool quotientTangentNatural(const QuotientTangent& a, const QuotientTangent& b,
                                   const Matrix& iota1, const Matrix& iota2, const Matrix& phi,
                                   const Matrix& psi) {
  Matrix over = quotientDVBMap(tangentMap(phi), tangentMap(psi), tangentMap(iota1), tangentMap(iota2),
                               a.quotient, b.quotient);
  Matrix phiBar = descend(phi, a.q, b.q);
  return b.iso * over == tangentMap(phiBar) * a.iso;
}

struct UpsilonFlip {
  NormalBundle nj;          // nu(j)
  Presented Tnu;            // T nu(j)
  PhiFlip phi;              // Phi_j, whose normal member is nu(j_*)
  QuotientTangent qt;       // T(j^*TN) /_v TTM ~ T nu(j)
  Matrix phiInverse;        // Phi^j
  Matrix quotientFlipMap;   // Phi^j / kappa_M
  Matrix map;               // T nu(j) => nu(j_*)
};

inline UpsilonFlip upsilonFlip(const Presented& m, const Presented& n, const Matrix& j) {
  UpsilonFlip r;
  r.nj = normalBundle(m, n, j);
  r.phi = phiFlip(m, n, j);
  r.qt = quotientTangent(r.nj.pull.P, r.nj.TM, r.nj.sharp);
  r.Tnu = r.qt.TEF;
  r.phiInverse = inverse(r.phi.map);
  r.quotientFlipMap = quotientFlip(r.phiInverse, r.phi.kappaM, tangentMap(r.nj.sharp), r.phi.starSharp,
                                   r.qt.quotient, r.phi.normal.quotient);
  r.map = r.quotientFlipMap * inverse(r.qt.iso);
  return r;
}

inline FlipMap Upsilon(const Matrix& j) {
  UpsilonFlip u = upsilonFlip(plainSpace("M", j.cols()), plainSpace("N", j.rows()), j);
  return {u.Tnu.dvs(), u.phi.normal.dvs(), u.map, FlipKind::Total, {}};
}

// --- vertical functoriality ------------------------------------------------------------------

// Unknown matrices U_k enter as sum_k L_k U_k R_k = rhs; returns the U_k or nothing.
inline std::optional<std::vector<Matrix>> solveLinearTerms(const std::vector<std::pair<Matrix, Matrix>>& terms,
                                                           const Matrix& rhs) {
  size_t unknowns = 0;
  for (const auto& [L, R] : terms) unknowns += L.cols() * R.rows();
  const size_t eqs = rhs.rows() * rhs.cols();
  Matrix A(eqs, unknowns), b(eqs, 1);
  for (size_t r = 0; r < rhs.rows(); ++r)
    for (size_t c = 0; c < rhs.cols(); ++c) b(r * rhs.cols() + c, 0) = rhs(r, c);
  size_t col = 0;
  for (const auto& [L, R] : terms)
    for (size_t p = 0; p < L.cols(); ++p)
      for (size_t q = 0; q < R.rows(); ++q, ++col)
        for (size_t r = 0; r < L.rows(); ++r) {
          if (sgn(L(r, p)) == 0) continue;
          for (size_t c = 0; c < R.cols(); ++c)
            if (sgn(R(q, c)) != 0) A(r * rhs.cols() + c, col) = L(r, p) * R(q, c);
        }
  Matrix x;
  try {
    x = solve(A, b);
  } catch (const CompatibilityError&) {
    return std::nullopt;
  }
  std::vector<Matrix> out;
  size_t off = 0;
  for (const auto& [L, R] : terms) {
    Matrix u(L.cols(), R.rows());
    for (size_t p = 0; p < u.rows(); ++p)
      for (size_t q = 0; q < u.cols(); ++q) u(p, q) = x(off++, 0);
    out.push_back(u);
  }
  return out;
}

// An equivariant right inverse of a surjective vb-map beta: B -> C over the identity,
// chosen weight by weight with the pivot solutions of solve().
inline Matrix equivariantSection(const Matrix& beta, const ScalingAction& b, const ScalingAction& c) {
  Matrix s(beta.cols(), beta.rows());
  for (unsigned w = 0; w <= std::max(b.maxWeight(), c.maxWeight()); ++w) {
    Matrix pb = b.projection(w), pc = c.projection(w);
    s = s + pb * solve(beta * pb, pc) * pc;
  }
  return s;
}

// One side of the splitting nu(j i) ~ i^*nu(j) (+) nu(i) for M -i-> N -j-> P.
struct CompositeSplitting {
  NormalBundle ni, nj, nji;
  PulledBundle pulled;          // i^*nu(j)
  Presented sumNu;              // nu(i) with renamed blocks
  PresentedFiberProduct whitney;  // i^*nu(j) (+)_M nu(i)
  Matrix alpha;                 // nu(i) -> nu(j i)
  Matrix beta;                  // nu(j i) -> i^*nu(j)
  Matrix section;               // i^*nu(j) -> nu(j i)
  Matrix sigma;                 // whitney -> nu(j i)
};

inline Presented withPrefix(const Presented& x, const std::string& prefix) {
  Presented p = x;
  for (auto& b : p.amb.blocks) b.name = prefix + b.name;
  return p;
}

inline Matrix splittingMap(const CompositeSplitting& s, const Matrix& section) {
  const Matrix& W1 = s.whitney.pr1;
  const Matrix& W2 = s.whitney.pr2;
  return section * W1 + s.alpha * W2 - s.nji.zero * s.ni.proj * W2;
}

inline CompositeSplitting compositeSplitting(const Presented& m, const Presented& n, const Presented& p,
                                             const Matrix& i, const Matrix& j) {
  CompositeSplitting s;
  s.ni = normalBundle(m, n, i);
  s.nj = normalBundle(n, p, j);
  s.nji = normalBundle(m, p, j * i);
  s.pulled = pullbackBundle(s.nj.bundle(), m, i);
  s.sumNu = withPrefix(s.ni.nu, "nu:");
  s.whitney = fiberProduct(s.pulled.bundle.E, s.pulled.bundle.proj, s.sumNu, s.ni.proj);
  const size_t dm = m.dim(), dp = p.dim();
  s.alpha = normalDifferential({Matrix::identity(dm), j, i, j * i}, s.ni, s.nji);
  Matrix toNuJ = normalDifferential({i, Matrix::identity(dp), j * i, j}, s.nji, s.nj);
  s.beta = s.pulled.carrier.factor(s.nji.proj, toNuJ);
  s.section = equivariantSection(s.beta, s.nji.nu.action(0), s.pulled.bundle.E.action(0));
  s.sigma = splittingMap(s, s.section);
  return s;
}

// Vertically composable H: i1 => i2 and K: j1 => j2 with H.bottom = K.top.
struct VerticalFunctorialityCertificate {
  bool composable = false;
  bool exactSequences = false;     // 0 -> nu(i) -> nu(j i) -> i^*nu(j) -> 0 on both sides
  bool pivotSectionsCommute = false;
  bool splittingFound = false;
  bool commutes = false;
  Matrix composite;                // nu2(K . H)
  Matrix sumMap;                   // I^*nu2(K) (+) nu2(H)
  Matrix sigma1, sigma2;           // the splitting isomorphisms used
  Matrix obstruction;              // nu2(K . H) sigma1 - sigma2 (sum map) for the pivot sections
};

inline VerticalFunctorialityCertificate verticalFunctoriality(const TwoMap& H, const TwoMap& K) {
  VerticalFunctorialityCertificate c;
  c.composable = H.bottom == K.top && commutes(H) && commutes(K);
  if (!c.composable) throw CompatibilityError("verticalFunctoriality: 2-maps are not vertically composable");
  Presented M1 = plainSpace("M1", H.left.cols()), M2 = plainSpace("M2", H.right.cols());
  Presented N1 = plainSpace("N1", H.left.rows()), N2 = plainSpace("N2", H.right.rows());
  Presented P1 = plainSpace("P1", K.left.rows()), P2 = plainSpace("P2", K.right.rows());
  CompositeSplitting s1 = compositeSplitting(M1, N1, P1, H.left, K.left);
  CompositeSplitting s2 = compositeSplitting(M2, N2, P2, H.right, K.right);

  auto exact = [](const CompositeSplitting& s) {
    return isInjective(s.alpha) && isSurjective(s.beta) &&
           isExactAt(s.alpha * s.ni.nu.projection(0, 1), s.beta);
  };
  c.exactSequences = exact(s1) && exact(s2);

  Matrix nuH = normalDifferential(H, s1.ni, s2.ni);
  Matrix nuK = normalDifferential(K, s1.nj, s2.nj);
  c.composite = normalDifferential(vCompose(K, H), s1.nji, s2.nji);
  Matrix pulledK = s2.pulled.carrier.factor(H.top * s1.pulled.carrier.pr1, nuK * s1.pulled.carrier.pr2);
  c.sumMap = s2.whitney.factor(pulledK * s1.whitney.pr1, nuH * s1.whitney.pr2);

  c.obstruction = c.composite * s1.sigma - s2.sigma * c.sumMap;
  c.pivotSectionsCommute = c.obstruction.isZero();
  c.sigma1 = s1.sigma;
  c.sigma2 = s2.sigma;
  if (c.pivotSectionsCommute) {
    c.splittingFound = true;
  } else {
    // Sections may move by fiber maps u: i^*nu(j) -> nu(i); the square is linear in them.
    auto fiberParts = [](const CompositeSplitting& s) {
      Subspace fa = image(s.ni.nu.projection(0, 1));
      Matrix pc = s.pulled.bundle.E.projection(0, 1);
      Subspace fc = image(pc);
      return std::make_pair(s.alpha * fa.inclusion(), fc.retraction() * pc);
    };
    auto [L1, R1] = fiberParts(s1);
    auto [L2, R2] = fiberParts(s2);
    auto sol = solveLinearTerms({{c.composite * L1, R1 * s1.whitney.pr1},
                                 {-L2, R2 * s2.whitney.pr1 * c.sumMap}},
                                -c.obstruction);
    if (sol) {
      c.splittingFound = true;
      c.sigma1 = splittingMap(s1, s1.section + L1 * (*sol)[0] * R1);
      c.sigma2 = splittingMap(s2, s2.section + L2 * (*sol)[1] * R2);
    }
  }
  c.commutes = c.splittingFound && isBijective(c.sigma1) && isBijective(c.sigma2) &&
               c.composite * c.sigma1 == c.sigma2 * c.sumMap;
  return c;
}

}  // namespace dvbsym
