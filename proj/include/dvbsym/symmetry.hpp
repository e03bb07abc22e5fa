#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "normal.hpp"
#include "rng.hpp"

namespace dvbsym {

// M1 -i1-> M2 (top), M1 -j1-> N1 (left), M2 -j2-> N2 (right), N1 -i2-> N2 (bottom)
struct ImmersionSquare {
  size_t m1 = 0, m2 = 0, n1 = 0, n2 = 0;
  Matrix i1, i2, j1, j2;
};

inline void validate(const ImmersionSquare& sq) {
  auto shape = [](const Matrix& f, size_t r, size_t c, const char* name) {
    if (f.rows() != r || f.cols() != c)
      throw DimensionError(std::string("square: ") + name + " is " + f.shape() + ", expected " +
                           std::to_string(r) + "x" + std::to_string(c));
  };
  shape(sq.i1, sq.m2, sq.m1, "i1");
  shape(sq.j1, sq.n1, sq.m1, "j1");
  shape(sq.i2, sq.n2, sq.n1, "i2");
  shape(sq.j2, sq.n2, sq.m2, "j2");
  for (const auto* f : {&sq.i1, &sq.j1, &sq.i2, &sq.j2})
    if (!isInjective(*f)) throw ImmersionError("square: an edge is not injective");
  if (sq.i2 * sq.j1 != sq.j2 * sq.i1) throw CompatibilityError("square: i2 j1 != j2 i1");
}

// exchanges the roles of I and J
inline ImmersionSquare transpose(const ImmersionSquare& sq) {
  return {sq.m1, sq.n1, sq.m2, sq.n2, sq.j1, sq.j2, sq.i1, sq.i2};
}

// criterion (3): 0 -> TM1 -> TN1 x TM2 -> TN2 exact
inline bool exactnessCriterion(const ImmersionSquare& sq) {
  Matrix in = vstack({sq.j1, sq.i1});
  Matrix out = hstack({sq.i2, -sq.j2});
  return isInjective(in) && isExactAt(in, out);
}

// Corner square: top j, left id, right i, bottom i j.
inline ImmersionSquare cornerSquare(const Matrix& j, const Matrix& i) {
  if (!isInjective(j) || !isInjective(i)) throw ImmersionError("cornerSquare: maps must be injective");
  if (i.cols() != j.rows()) throw DimensionError("cornerSquare: i and j do not compose");
  ImmersionSquare sq{j.cols(), j.rows(), j.cols(), i.rows(), j, i * j, Matrix::identity(j.cols()), i};
  validate(sq);
  if (!exactnessCriterion(sq)) throw std::logic_error("cornerSquare: corner square is not regular");
  return sq;
}

// --- the normal data shared by everything below ----------------------------------------------

// Normal bundles of the four edges, both normal differentials and both double normals.
// Spaces are plain primitives named M1, M2, N1, N2.
struct SquareNormals {
  ImmersionSquare sq;
  Presented M1, M2, N1, N2;
  NormalBundle nI1, nI2, nJ1, nJ2;
  Matrix nu2J;  // nu(i1) -> nu(i2)
  Matrix nu2I;  // nu(j1) -> nu(j2)

  SquareNormals transposed() const {
    SquareNormals t = *this;
    t.sq = transpose(sq);
    std::swap(t.M2, t.N1);
    std::swap(t.nI1, t.nJ1);
    std::swap(t.nI2, t.nJ2);
    std::swap(t.nu2J, t.nu2I);
    return t;
  }
};

inline SquareNormals squareNormals(const ImmersionSquare& sq) {
  validate(sq);
  SquareNormals s;
  s.sq = sq;
  s.M1 = plainSpace("M1", sq.m1);
  s.M2 = plainSpace("M2", sq.m2);
  s.N1 = plainSpace("N1", sq.n1);
  s.N2 = plainSpace("N2", sq.n2);
  s.nI1 = normalBundle(s.M1, s.M2, sq.i1);
  s.nI2 = normalBundle(s.N1, s.N2, sq.i2);
  s.nJ1 = normalBundle(s.M1, s.N1, sq.j1);
  s.nJ2 = normalBundle(s.M2, s.N2, sq.j2);
  s.nu2J = normalDifferential({sq.j1, sq.j2, sq.i1, sq.i2}, s.nI1, s.nI2);
  s.nu2I = normalDifferential({sq.i1, sq.i2, sq.j1, sq.j2}, s.nJ1, s.nJ2);
  return s;
}

// --- regularity ----------------------------------------------------------------------------

struct RegularityReport {
  bool regular = false;
  bool criterion1 = false;  // nu2(J) is a vb-immersion
  bool criterion2 = false;  // nu2(I) is a vb-immersion
  bool criterion3 = false;  // 0 -> TM1 -> TN1 x TM2 -> TN2 exact
  bool agree = false;
  size_t rankNuI1 = 0, rankNuI2 = 0, rankNuJ1 = 0, rankNuJ2 = 0;
  std::vector<std::string> diagnostics;
};

inline RegularityReport regularityReport(const SquareNormals& s) {
  RegularityReport r;
  r.criterion1 = isVBImmersion(s.nI1.nu, s.nI2.nu, s.nu2J);
  r.criterion2 = isVBImmersion(s.nJ1.nu, s.nJ2.nu, s.nu2I);
  r.criterion3 = exactnessCriterion(s.sq);
  r.agree = r.criterion1 == r.criterion2 && r.criterion2 == r.criterion3;
  r.regular = r.criterion3;
  r.rankNuI1 = s.nI1.fiberRank();
  r.rankNuI2 = s.nI2.fiberRank();
  r.rankNuJ1 = s.nJ1.fiberRank();
  r.rankNuJ2 = s.nJ2.fiberRank();
  auto explain = [&](bool ok, const char* which, size_t from, size_t to) {
    if (ok) return;
    std::string d = std::string("nu2(") + which + "): rank " + std::to_string(from) + " into rank " +
                    std::to_string(to);
    d += from > to ? " cannot be injective (dimension issue)" : " is not fiberwise injective";
    r.diagnostics.push_back(d);
  };
  explain(r.criterion1, "J", r.rankNuI1, r.rankNuI2);
  explain(r.criterion2, "I", r.rankNuJ1, r.rankNuJ2);
  if (!r.agree) r.diagnostics.push_back("regularity criteria disagree");
  return r;
}

// Throws std::logic_error when the three criteria disagree.
inline RegularityReport isRegular(const ImmersionSquare& sq) {
  RegularityReport r = regularityReport(squareNormals(sq));
  if (!r.agree) throw std::logic_error("isRegular: regularity criteria disagree");
  return r;
}

// --- Theta_I and its ingredients -------------------------------------------------------------

// Everything needed for Theta_I: nu2(I)^* T nu(j2) => nu(I^* j2*). The same code run on the
// transposed normals yields Theta_J.
struct ThetaData {
  Matrix pulledJ2;    // I^* j2*: i1^*TM2 -> i2^*TN2
  Matrix pulledI2;    // J^* i2*: j1^*TN1 -> j2^*TN2
  VBNormal nuIj;      // nu(I^* j2*)
  VBNormal nuJi;      // nu(J^* i2*)
  VBNormal dnI;       // nu(nu2(I))
  PhiFlip phiI1, phiI2;
  PresentedFiberProduct vpb;     // (j2*)^{*,v} TTN2
  Matrix vertId;                 // T(j2^*TN2) -> (j2*)^{*,v} TTN2
  PresentedFiberProduct lhsPb;   // (J^* i2*)^{*,h} (j2*)^{*,v} TTN2
  Matrix toLhs;                  // (J^* i2*)^{*,h} T(j2^*TN2) -> lhsPb
  PullbackFlip pf;               // pullback of Phi_{i2} along I^* j2*
  Matrix lemPb;                  // lhsPb -> pf.source
  Matrix psiI2;                  // Psi_{i2}
  Matrix psiJ2;                  // the swap, Psi_{j2}
  Matrix iota1;                  // I_flat^* j2sharp*
  PullbackQuotientIso pqi;
  QuotientTangent qtJ2;          // T(j2^*TN2) /_v TTM2 ~ T nu(j2)
  Matrix quotientFlipMap;        // Psi_{i2} / Phi_{i1}
  Matrix left;                   // pqi.lhs.X -> nu2(I)^* T nu(j2)
  Matrix theta;                  // Theta_I
};

inline std::string blockName(const Presented& x) { return x.amb.blocks.at(0).name; }

inline ThetaData thetaData(const SquareNormals& s) {
  const auto& sq = s.sq;
  const std::string M1 = blockName(s.M1), M2 = blockName(s.M2), N1 = blockName(s.N1), N2 = blockName(s.N2);
  ThetaData d;
  d.pulledJ2 = s.nI2.pull.factor(sq.j1 * s.nI1.pull.pr1, tangentMap(sq.j2) * s.nI1.pull.pr2);
  d.pulledI2 = s.nJ2.pull.factor(sq.i1 * s.nJ1.pull.pr1, tangentMap(sq.i2) * s.nJ1.pull.pr2);
  d.nuIj = vbNormal(s.nI1.pull.P, s.nI2.pull.P, d.pulledJ2);
  d.nuJi = vbNormal(s.nJ1.pull.P, s.nJ2.pull.P, d.pulledI2);
  d.dnI = vbNormal(s.nJ1.nu, s.nJ2.nu, s.nu2I);
  d.phiI1 = phiFlip(s.M1, s.M2, sq.i1);
  d.phiI2 = phiFlip(s.N1, s.N2, sq.i2);

  // T(j2^*TN2) = (j2*)^{*,v} TTN2, pulled back horizontally along J^* i2*
  const size_t m2 = sq.m2, n2 = sq.n2;
  Presented TTN2 = tangent(s.nJ2.TN, "t");
  Matrix intoSideB(4 * n2, 2 * m2);
  intoSideB.setBlock(0, 0, sq.j2);
  intoSideB.setBlock(2 * n2, m2, sq.j2);
  d.vpb = sidePullbackV(s.nJ2.TM, intoSideB, TTN2);
  const Presented& TJ2 = d.nuJi.TF;
  d.vertId = induced(renaming(TJ2.amb, d.vpb.P.amb, {{M2 + ".t", M2 + ".u"}}), TJ2, d.vpb.P);
  Matrix alongJi = vstack({d.pulledI2, Matrix(d.pulledI2.rows(), d.pulledI2.cols())});
  d.lhsPb = sidePullbackH(s.nJ1.pull.P, d.vertId * alongJi, d.vpb.P);
  d.toLhs = sidePullbackMap(d.nuJi.pull, d.lhsPb, s.nJ1.pull.P.identity(), d.vertId);

  // pullback flip of Phi_{i2} along I^* j2*
  Matrix psi2 = vstack({d.pulledJ2, Matrix(d.pulledJ2.rows(), d.pulledJ2.cols())});
  Matrix psi1 = inverse(d.phiI2.map) * psi2;
  d.pf = pullbackFlip(s.nI1.pull.P, psi1, d.phiI2.normal.pull.P, psi2, d.phiI2.target, d.phiI2.map,
                      Orientation::Vertical);
  d.lemPb = induced(renaming(d.lhsPb.P.amb, d.pf.source.P.amb), d.lhsPb.P, d.pf.source.P);
  Matrix intoNuIj = d.nuIj.pull.factor(d.pf.target.pr1, d.pf.target.pr2);
  d.psiI2 = intoNuIj * d.pf.map * d.lemPb * d.toLhs;

  d.psiJ2 = induced(renaming(d.nuIj.pull.P.amb, d.nuJi.pull.P.amb,
                             {{M2 + ".u", M2 + ".t"}, {N1 + ".t", N1 + ".u"}, {N2 + ".u", N2 + ".t"},
                              {N2 + ".t", N2 + ".u"}}),
                    d.nuIj.pull.P, d.nuJi.pull.P);

  d.iota1 = sidePullbackMap(d.phiI1.normal.pull, d.nuJi.pull, s.nJ1.sharp, tangentMap(s.nJ2.sharp));

  // (J^* i2*)^* T(j2^*TN2) /_v (i1*)^* TTM2 ~ nu2(I)^{*,h} T nu(j2)
  Presented TTM2 = tangent(s.nJ2.TM, "t");
  d.pqi = pullbackQuotientIso(s.nJ1.pull.P, s.nJ1.TM, s.nJ1.sharp, TJ2, TTM2, tangentMap(s.nJ2.sharp),
                              alongJi, vstack({tangentMap(sq.i1), Matrix(2 * sq.m2, 2 * sq.m1)}),
                              Orientation::Vertical);
  d.qtJ2 = quotientTangent(s.nJ2.pull.P, s.nJ2.TM, s.nJ2.sharp);
  Matrix toDnI = sidePullbackMap(d.pqi.rhs, d.dnI.pull, s.nJ1.nu.identity(), d.qtJ2.iso);
  d.left = toDnI * d.pqi.iso;

  d.quotientFlipMap = quotientFlip(d.psiI2, d.phiI1.map, d.iota1, d.nuIj.sharp, d.pqi.lhs, d.nuIj.quotient);
  d.theta = d.quotientFlipMap * inverse(d.left);
  return d;
}

// --- the symmetry isomorphism ----------------------------------------------------------------

struct LemmaResult {
  std::string name;
  bool pass = false;
  std::string detail;
  std::vector<Matrix> witness;
};

struct SymmetryData {
  SquareNormals normals;
  RegularityReport regularity;
  VBNormal dnJ, dnI;
  ThetaData thI, thJ;        // Theta_I from the square, Theta_J from its transpose
  UpsilonFlip upsI1, upsJ1;
  Matrix nu2Jsharp;          // nu2(J_sharp): nu(i1*) -> nu(J^* i2*)
  Matrix nu2Isharp;          // nu2(I_sharp): nu(j1*) -> nu(I^* j2*)
  PresentedQuotient cokerJ;  // nu(J^* i2*) /_v nu(i1*)
  PresentedQuotient cokerI;  // nu(I^* j2*) /_v nu(j1*)
  Matrix toDnJ;              // nu(I^* j2*) -> nu(nu2(J)), before descending
  Matrix toDnI;
  Matrix id3x3J;             // cokerI.X -> dnJ
  Matrix id3x3I;             // cokerJ.X -> dnI
  Matrix flipJ;              // Theta_J / Upsilon^{i1}
  Matrix flipI;              // Theta^I / Upsilon_{j1}
  Matrix lambda;             // route through Theta_J
  Matrix lambdaAlt;          // route through Theta^I
};

// Natural map nu(I^* j2*) -> nu(nu2(J)) induced by the quotients q_{i1}, q_{i2}.
inline Matrix towardDoubleNormal(const SquareNormals& s, const VBNormal& nuIj, const VBNormal& dnJ) {
  Matrix onPull = sidePullbackMap(nuIj.pull, dnJ.pull, s.nI1.quot, tangentMap(s.nI2.quot));
  return descend(onPull, nuIj.quotient.quot, dnJ.quotient.quot);
}

inline SymmetryData symmetryData(const ImmersionSquare& sq) {
  SymmetryData d;
  d.normals = squareNormals(sq);
  d.regularity = regularityReport(d.normals);
  if (!d.regularity.regular) throw ImmersionError("symmetry: the square is not regular");
  const SquareNormals& s = d.normals;
  SquareNormals t = s.transposed();
  d.thI = thetaData(s);
  d.thJ = thetaData(t);
  d.dnI = d.thI.dnI;
  d.dnJ = d.thJ.dnI;
  d.upsI1 = upsilonFlip(s.M1, s.M2, sq.i1);
  d.upsJ1 = upsilonFlip(s.M1, s.N1, sq.j1);

  const VBNormal& nuI1star = d.thI.phiI1.normal;  // nu(i1*)
  const VBNormal& nuJ1star = d.thJ.phiI1.normal;  // nu(j1*)
  const VBNormal& nuJi = d.thI.nuJi;
  const VBNormal& nuIj = d.thI.nuIj;
  d.nu2Jsharp = vbNormalDifferential(nuI1star, nuJi, s.nJ1.sharp, s.nJ2.sharp);
  d.nu2Isharp = vbNormalDifferential(nuJ1star, nuIj, s.nI1.sharp, s.nI2.sharp);
  d.cokerJ = quotientOf(nuJi.X(), d.nu2Jsharp, nuI1star.X(), Orientation::Vertical);
  d.cokerI = quotientOf(nuIj.X(), d.nu2Isharp, nuJ1star.X(), Orientation::Vertical);

  d.toDnJ = towardDoubleNormal(s, nuIj, d.dnJ);
  d.toDnI = towardDoubleNormal(t, nuJi, d.dnI);
  d.id3x3J = descend(d.toDnJ, d.cokerI.quot, d.dnJ.X().identity());
  d.id3x3I = descend(d.toDnI, d.cokerJ.quot, d.dnI.X().identity());

  // route 1: Theta_J / Upsilon^{i1}, then the identification on the codomain
  d.flipJ = quotientFlip(d.thJ.theta, d.upsI1.map, d.dnJ.sharp, d.nu2Jsharp, d.dnJ.quotient, d.cokerJ);
  d.lambda = d.id3x3I * d.flipJ;
  // route 2: Theta^I / Upsilon_{j1}, with the identification on the domain
  d.flipI = quotientFlip(inverse(d.thI.theta), inverse(d.upsJ1.map), d.nu2Isharp, d.dnI.sharp, d.cokerI,
                         d.dnI.quotient);
  d.lambdaAlt = d.flipI * inverse(d.id3x3J);
  return d;
}

enum class NormalOrder { JFirst, IFirst };

// nu(nu2(J)) for JFirst, nu(nu2(I)) for IFirst
inline VBNormal doubleNormal(const ImmersionSquare& sq, NormalOrder order) {
  SquareNormals s = squareNormals(sq);
  if (!regularityReport(s).regular) throw ImmersionError("doubleNormal: the square is not regular");
  if (order == NormalOrder::JFirst) return vbNormal(s.nI1.nu, s.nI2.nu, s.nu2J);
  return vbNormal(s.nJ1.nu, s.nJ2.nu, s.nu2I);
}

// Psi_{i2}: (J^* i2*)^{*,h} T(j2^*TN2) => (I^* j2*)^{*,h} T(i2^*TN2)
inline FlipMap psiFlip(const ImmersionSquare& sq) {
  ThetaData t = thetaData(squareNormals(sq));
  return {t.nuJi.pull.P.dvs(), t.nuIj.pull.P.dvs(), t.psiI2, FlipKind::Total, {}};
}

// Theta_I: nu2(I)^{*,h} T nu(j2) => nu(I^* j2*)
inline FlipMap thetaI(const ImmersionSquare& sq) {
  SquareNormals s = squareNormals(sq);
  if (!regularityReport(s).regular) throw ImmersionError("thetaI: the square is not regular");
  ThetaData t = thetaData(s);
  return {t.dnI.pull.P.dvs(), t.nuIj.dvs(), t.theta, FlipKind::Total, {}};
}

// Theta_J: nu2(J)^{*,h} T nu(i2) => nu(J^* i2*)
inline FlipMap thetaJ(const ImmersionSquare& sq) { return thetaI(transpose(sq)); }

// --- lemma verifiers ----------------------------------------------------------------------

inline const std::vector<std::string>& lemmaNames() {
  static const std::vector<std::string> names{
      "lem-pb",  "psi-consistency", "lem2x2",      "lem.dvbmap0", "lem.dvbmap",
      "prop.phi", "lem.flip3x2",    "lem.sq-flip", "lem.3x3",     "3x3-exact"};
  return names;
}

namespace detail {

inline LemmaResult equality(const std::string& name, const Matrix& lhs, const Matrix& rhs) {
  LemmaResult r{name, lhs == rhs, "", {}};
  if (!r.pass) {
    r.detail = "sides differ";
    r.witness = {lhs, rhs};
  }
  return r;
}

inline bool isDVBIso(const Presented& a, const Presented& b, const Matrix& f) {
  return isBijective(f) && isDVBMap(a.dvs(), b.dvs(), f);
}

}  // namespace detail

inline LemmaResult verifyLemma(const std::string& name, const SymmetryData& d) {
  const SquareNormals& s = d.normals;
  const auto& sq = s.sq;
  const ThetaData& th = d.thI;
  try {
    if (name == "lem-pb") {
      bool ok = detail::isDVBIso(th.lhsPb.P, th.pf.source.P, th.lemPb) &&
                detail::isDVBIso(d.thJ.lhsPb.P, d.thJ.pf.source.P, d.thJ.lemPb);
      return {name, ok, ok ? "" : "identification is not a dvb-isomorphism", {th.lemPb}};
    }
    if (name == "psi-consistency") {
      // Psi^{i2} = Psi_{j2}, and the transposed statement
      LemmaResult r = detail::equality(name, inverse(th.psiI2), th.psiJ2);
      if (r.pass) r = detail::equality(name, inverse(d.thJ.psiI2), d.thJ.psiJ2);
      return r;
    }
    if (name == "lem2x2") {
      // nu(I^* j2*) ~ nu2(I)^{*,v} nu(j2*) through the pullback-quotient identification
      const PhiFlip& phiJ2 = d.thJ.phiI2;  // its normal member is nu(j2*)
      const std::string N1 = blockName(s.N1), N2 = blockName(s.N2);
      Matrix intoSideB = induced(renaming(s.nJ2.pull.P.amb, phiJ2.normal.pull.P.amb, {{N2 + ".u", N2 + ".t"}}),
                                 s.nJ2.pull.P, phiJ2.normal.pull.P);
      Presented TTM2 = tangent(s.nJ2.TM, "t");
      Matrix ti1(TTM2.dim(), s.nJ1.TM.dim());
      ti1.setBlock(0, 0, sq.i1);
      ti1.setBlock(2 * sq.m2, sq.m1, sq.i1);
      Matrix phi = intoSideB * th.pulledI2;
      auto pqi = pullbackQuotientIso(s.nJ1.pull.P, s.nJ1.TM, s.nJ1.sharp, phiJ2.normal.pull.P, TTM2,
                                     phiJ2.normal.sharp, phi, ti1, Orientation::Horizontal);
      auto pd = sidePullbackV(s.nJ1.pull.P, phi, phiJ2.normal.pull.P);
      Matrix rd = induced(renaming(pd.P.amb, th.nuIj.pull.P.amb, {{N1 + ".u", N1 + ".t"}}), pd.P, th.nuIj.pull.P);
      if (!detail::isDVBIso(pd.P, th.nuIj.pull.P, rd)) return {name, false, "renaming is not a dvb-isomorphism", {rd}};
      Matrix onQuotients = descend(rd, pqi.lhs.quot, th.nuIj.quotient.quot);
      Matrix iso = pqi.iso * inverse(onQuotients);
      bool ok = detail::isDVBIso(th.nuIj.X(), pqi.rhs.P, iso);
      return {name, ok, ok ? "" : "no dvb-isomorphism", {iso}};
    }
    if (name == "lem.dvbmap0") {
      // (a) T(I^* j2*) against the vertical pullback of j2** along I_*
      Presented TTM2 = tangent(s.nJ2.TM, "t"), TTN2 = tangent(s.nJ2.TN, "t");
      Matrix ti1(4 * sq.m2, 2 * sq.m1), ti2(4 * sq.n2, 2 * sq.n1);
      ti1.setBlock(0, 0, sq.i1);
      ti1.setBlock(2 * sq.m2, sq.m1, sq.i1);
      ti2.setBlock(0, 0, sq.i2);
      ti2.setBlock(2 * sq.n2, sq.n1, sq.i2);
      auto src = sidePullbackV(s.nI1.TM, ti1, TTM2);
      auto tgt = sidePullbackV(s.nI2.TM, ti2, TTN2);
      Matrix pulled = sidePullbackMap(src, tgt, tangentMap(sq.j1), tangentMap(tangentMap(sq.j2)));
      const Presented& T1 = th.nuIj.TE;  // T(i1^*TM2)
      const Presented& T2 = th.nuIj.TF;  // T(i2^*TN2)
      Matrix r1 = induced(renaming(T1.amb, src.P.amb, {{blockName(s.M1) + ".t", blockName(s.M1) + ".u"}}), T1, src.P);
      Matrix r2 = induced(renaming(T2.amb, tgt.P.amb, {{blockName(s.N1) + ".t", blockName(s.N1) + ".u"}}), T2, tgt.P);
      LemmaResult a = detail::equality(name, r2 * tangentMap(th.pulledJ2), pulled * r1);
      if (!a.pass) {
        a.detail = "(a) fails";
        return a;
      }
      if (!detail::isDVBIso(T1, src.P, r1) || !detail::isDVBIso(T2, tgt.P, r2))
        return {name, false, "(a) identifications are not dvb-isomorphisms", {r1, r2}};
      // (b) the horizontal sharpening of I^* j2* against the pullback of j2*sharp
      const PhiFlip& phiJ2 = d.thJ.phiI2;
      Matrix intoSide = induced(renaming(s.nJ2.pull.P.amb, phiJ2.normal.pull.P.amb,
                                         {{blockName(s.N2) + ".u", blockName(s.N2) + ".t"}}),
                                s.nJ2.pull.P, phiJ2.normal.pull.P);
      auto pd = sidePullbackV(s.nJ1.pull.P, intoSide * th.pulledI2, phiJ2.normal.pull.P);
      Matrix rhs = sidePullbackMap(src, pd, s.nJ1.sharp, phiJ2.normal.sharp);
      Matrix rd = induced(renaming(pd.P.amb, th.nuIj.pull.P.amb, {{blockName(s.N1) + ".u", blockName(s.N1) + ".t"}}),
                          pd.P, th.nuIj.pull.P);
      LemmaResult b = detail::equality(name, th.nuIj.sharp, rd * rhs * r1);
      if (!b.pass) b.detail = "(b) fails";
      else if (!detail::isDVBIso(pd.P, th.nuIj.pull.P, rd))
        return {name, false, "(b) identification is not a dvb-isomorphism", {rd}};
      return b;
    }
    if (name == "lem.dvbmap") {
      // Psi^{i2} (I^* j2*)_sharp = I_flat^* j2sharp* Phi^{i1}, with Psi^{i2} = Psi_{j2}
      return detail::equality(name, th.psiJ2 * th.nuIj.sharp, th.iota1 * inverse(th.phiI1.map));
    }
    if (name == "prop.phi") {
      for (const PhiFlip* p : {&d.thI.phiI1, &d.thI.phiI2, &d.thJ.phiI1, &d.thJ.phiI2}) {
        LemmaResult r = detail::equality(name, p->map * p->starSharp, p->sharpStar * p->kappaM);
        if (!r.pass) return r;
        if (!isFlipMap(p->normal.pull.P.dvs(), p->target.dvs(), p->map) || !isBijective(p->map))
          return {name, false, "Phi is not a flip isomorphism", {p->map}};
      }
      return {name, true, "", {}};
    }
    if (name == "lem.flip3x2") {
      for (const ThetaData* t : {&d.thI, &d.thJ}) {
        if (!isBijective(t->theta) || !isFlipMap(t->dnI.pull.P.dvs(), t->nuIj.dvs(), t->theta))
          return {name, false, "Theta is not a flip isomorphism", {t->theta}};
        if (!detail::isDVBIso(t->pqi.lhs.X, t->dnI.pull.P, t->left))
          return {name, false, "left identification is not a dvb-isomorphism", {t->left}};
      }
      return {name, true, "", {}};
    }
    if (name == "lem.sq-flip") {
      LemmaResult r = detail::equality(name, d.thJ.theta * d.dnJ.sharp, d.nu2Jsharp * d.upsI1.map);
      if (r.pass) r = detail::equality(name, d.thI.theta * d.dnI.sharp, d.nu2Isharp * d.upsJ1.map);
      return r;
    }
    if (name == "lem.3x3") {
      bool ok = detail::isDVBIso(d.cokerI.X, d.dnJ.X(), d.id3x3J) && detail::isDVBIso(d.cokerJ.X, d.dnI.X(), d.id3x3I);
      return {name, ok, ok ? "" : "identification is not a dvb-isomorphism", {d.id3x3J, d.id3x3I}};
    }
    if (name == "3x3-exact") {
      // rows: vertical sequences; columns: horizontal sequences
      const PhiFlip& phiJ1 = d.thJ.phiI1;  // (j1*)^* TTN1 and nu(j1*)
      Matrix r1i = tangentMap(s.nI1.sharp), r1q = tangentMap(s.nI1.quot);
      Matrix r2i = sidePullbackMap(phiJ1.normal.pull, th.nuIj.pull, s.nI1.sharp, tangentMap(s.nI2.sharp));
      Matrix r2q = sidePullbackMap(th.nuIj.pull, d.dnJ.pull, s.nI1.quot, tangentMap(s.nI2.quot));
      const Matrix& r3i = d.nu2Isharp;
      const Matrix& r3q = d.toDnJ;
      const Matrix& c1i = phiJ1.normal.sharp;
      const Matrix& c1q = phiJ1.normal.quotient.quot;
      const Matrix& c2i = th.nuIj.sharp;
      const Matrix& c2q = th.nuIj.quotient.quot;
      const Matrix& c3i = d.dnJ.sharp;
      const Matrix& c3q = d.dnJ.quotient.quot;
      auto exact = [](const Presented& src, const Matrix& i, const Matrix& q, size_t action) {
        return isInjective(i) && isSurjective(q) && isExactAt(i * src.projection(action, 1), q);
      };
      const Presented& TTM1 = phiJ1.normal.TE;
      std::vector<std::pair<std::string, bool>> checks{
          {"row 1", exact(TTM1, r1i, r1q, 1)},
          {"row 2", exact(phiJ1.normal.pull.P, r2i, r2q, 1)},
          {"row 3", exact(phiJ1.normal.X(), r3i, r3q, 1)},
          {"column 1", exact(TTM1, c1i, c1q, 0)},
          {"column 2", exact(th.nuIj.TE, c2i, c2q, 0)},
          {"column 3", exact(d.dnJ.TE, c3i, c3q, 0)},
          {"square 11", c2i * r1i == r2i * c1i},
          {"square 12", r2q * c2i == c3i * r1q},
          {"square 21", r3i * c1q == c2q * r2i},
          {"square 22", r3q * c2q == c3q * r2q},
      };
      for (const auto& [what, ok] : checks)
        if (!ok) return {name, false, what + " fails", {}};
      return {name, true, "", {}};
    }
  } catch (const std::exception& e) {
    return {name, false, e.what(), {}};
  }
  throw std::invalid_argument("verifyLemma: unknown lemma '" + name + "'");
}

// --- certificate -------------------------------------------------------------------------------

struct SymmetryCertificate {
  ImmersionSquare square;
  RegularityReport regularity;
  bool regular = false;
  std::optional<DVS> dnJ, dnI;
  std::optional<Matrix> lambda;
  bool bijective = false;
  bool flipEquivariant = false;
  bool sidesMatch = false;
  bool altAgreement = false;
  size_t coreRankJ = 0, coreRankI = 0, coreOracle = 0;
  std::vector<LemmaResult> lemmas;
  std::string error;
};

// dim N2 - dim(i2(N1) + j2(M2))
inline size_t coreRankOracle(const ImmersionSquare& sq) { return sq.n2 - rank(hstack({sq.i2, sq.j2})); }

inline bool lambdaIsFlipAt(const DVS& a, const DVS& b, const Matrix& lambda) {
  FlipMap f{a, b, lambda, FlipKind::Total, {}};
  return isFlipMapAt(f, {Rational(0), Rational(2), Rational(3)});
}

inline SymmetryCertificate certify(const SymmetryData& d, bool withLemmas = true) {
  SymmetryCertificate c;
  c.square = d.normals.sq;
  c.regularity = d.regularity;
  c.regular = d.regularity.regular;
  DVS a = d.dnJ.dvs(), b = d.dnI.dvs();
  c.dnJ = a;
  c.dnI = b;
  c.lambda = d.lambda;
  c.bijective = isBijective(d.lambda);
  c.flipEquivariant = lambdaIsFlipAt(a, b, d.lambda);
  c.sidesMatch = imageOf(d.lambda, a.sideA()) == b.sideB() && imageOf(d.lambda, a.sideB()) == b.sideA();
  c.altAgreement = d.lambda == d.lambdaAlt;
  c.coreRankJ = a.coreRank();
  c.coreRankI = b.coreRank();
  c.coreOracle = coreRankOracle(c.square);
  if (withLemmas)
    for (const auto& n : lemmaNames()) c.lemmas.push_back(verifyLemma(n, d));
  return c;
}

inline SymmetryCertificate symmetryIso(const ImmersionSquare& sq, bool withLemmas = true) {
  SymmetryCertificate c;
  c.square = sq;
  c.regularity = isRegular(sq);
  c.regular = c.regularity.regular;
  if (!c.regular) return c;
  try {
    return certify(symmetryData(sq), withLemmas);
  } catch (const std::exception& e) {
    c.error = e.what();
    return c;
  }
}

inline bool passes(const SymmetryCertificate& c) {
  if (!c.regular || !c.lambda || !c.error.empty()) return false;
  for (const auto& l : c.lemmas)
    if (!l.pass) return false;
  return c.bijective && c.flipEquivariant && c.sidesMatch && c.altAgreement && c.coreRankJ == c.coreOracle &&
         c.coreRankI == c.coreOracle;
}

// Lambda recomputed with a randomly perturbed section in the final quotient flip.
// Reported, not asserted.
inline bool sectionChangeAgreement(const SymmetryData& d, Rng& rng) {
  const Matrix& q1 = d.dnJ.quotient.quot;
  Matrix s = solve(q1, Matrix::identity(q1.rows()));
  Matrix k = kernel(q1).inclusion();
  Matrix r(k.cols(), s.cols());
  for (size_t i = 0; i < r.rows(); ++i)
    for (size_t j = 0; j < r.cols(); ++j) r(i, j) = rng.integer(-3, 3);
  Matrix perturbed = d.cokerJ.quot * d.thJ.theta * (s + k * r);
  return d.id3x3I * perturbed == d.lambda;
}

// --- generators ------------------------------------------------------------------------------

struct SquareDims {
  size_t m1, m2, n1, n2;
};

inline bool feasible(const SquareDims& d) {
  return d.m1 <= d.n1 && d.m1 <= d.m2 && d.n1 + d.m2 - d.m1 <= d.n2;
}

// Conjugates a canonical regular square, N2 = A + B + C + D with M1 = A, N1 = A + B,
// M2 = A + C, by random unimodular changes of basis on all four spaces.
inline ImmersionSquare randomRegularSquare(uint64_t seed, const SquareDims& d) {
  if (!feasible(d)) throw DimensionError("randomRegularSquare: infeasible dimensions");
  Rng rng(seed);
  const size_t a = d.m1, b = d.n1 - d.m1, c = d.m2 - d.m1;
  Matrix i1(d.m2, d.m1), j1(d.n1, d.m1), i2(d.n2, d.n1), j2(d.n2, d.m2);
  for (size_t k = 0; k < a; ++k) {
    i1(k, k) = 1;
    j1(k, k) = 1;
  }
  for (size_t k = 0; k < a + b; ++k) i2(k, k) = 1;
  for (size_t k = 0; k < a; ++k) j2(k, k) = 1;
  for (size_t k = 0; k < c; ++k) j2(a + b + k, a + k) = 1;
  Matrix gM1 = rng.unimodular(d.m1), gM2 = rng.unimodular(d.m2), gN1 = rng.unimodular(d.n1),
         gN2 = rng.unimodular(d.n2);
  ImmersionSquare sq{d.m1, d.m2, d.n1, d.n2,
                     gM2 * i1 * inverse(gM1), gN2 * i2 * inverse(gN1),
                     gN1 * j1 * inverse(gM1), gN2 * j2 * inverse(gM2)};
  validate(sq);
  if (!exactnessCriterion(sq)) throw CompatibilityError("randomRegularSquare: generated square is not regular");
  return sq;
}

// Random commuting square of injections, regular or not: i1, j1, i2 random, and j2
// extended from i2 j1 on the image of i1. Rejection-sampled up to `retries` times.
inline ImmersionSquare randomSquare(uint64_t seed, const SquareDims& d, int retries = 200) {
  if (!feasible(d) && !(d.m1 <= d.n1 && d.m1 <= d.m2 && d.n1 <= d.n2 && d.m2 <= d.n2))
    throw DimensionError("randomSquare: infeasible dimensions");
  Rng rng(seed);
  for (int attempt = 0; attempt < retries; ++attempt) {
    Matrix i1 = rng.injective(d.m2, d.m1), j1 = rng.injective(d.n1, d.m1), i2 = rng.injective(d.n2, d.n1);
    Subspace im = image(i1);
    QuotientPresentation q = quotient(d.m2, im);
    Matrix basis = hstack({i1, q.section});
    Matrix values = hstack({i2 * j1, rng.matrix(d.n2, q.section.cols())});
    Matrix j2 = values * inverse(basis);
    if (!isInjective(j2)) continue;
    ImmersionSquare sq{d.m1, d.m2, d.n1, d.n2, i1, i2, j1, j2};
    validate(sq);
    return sq;
  }
  throw CompatibilityError("randomSquare: retry cap exceeded");
}

}  // namespace dvbsym
