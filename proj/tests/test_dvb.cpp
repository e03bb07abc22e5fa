#include <gtest/gtest.h>

#include "dvbsym/normal.hpp"
#include "support.hpp"

using namespace dvbsym;
using namespace dvbsym::testing;

namespace {

Presented doubleTangentOfLine() { return tangent(tangent(plainSpace("x", 1), "u"), "t"); }

DVS randomDVS(Rng& rng) {
  std::vector<size_t> pieces(4);
  for (auto& p : pieces) p = upTo(rng, 2);
  return gradedDVS(rng, "D", pieces).space.dvs();
}

}  // namespace

TEST(DVS, GradedPiecesAreCompleteOnRandomSpaces) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    DVS d = randomDVS(rng);
    ASSERT_TRUE(isValidDVS(d));
    ASSERT_TRUE(piecesComplete(d));
    size_t total = 0;
    for (const auto& p : gradedPieces(d)) total += rank(p);
    ASSERT_EQ(total, d.ambientDim);
  }
}

TEST(DVS, DoubleTangentPresentationMatchesDiagonalModel) {
  // the outer tangent direction carries the first action
  DVS d = doubleTangentOfLine().dvs();
  EXPECT_EQ(d, flipTotal(doubleTangent(1)));
  EXPECT_EQ(d.coreRank(), 1u);
  EXPECT_EQ(d.base().rank(), 1u);
}

TEST(Flip, TotalFlipIsAnInvolution) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    DVS d = randomDVS(rng);
    EXPECT_EQ(flipTotal(flipTotal(d)), d);
    EXPECT_TRUE(isFlipMap(totalFlip(d)));
  }
}

TEST(Flip, LiftsAreExchanged) {
  VBSpace e = tangentBundle(2);
  EXPECT_EQ(flipTotal(hLift(e)), vLift(e));
  EXPECT_EQ(flipTotal(vLift(e)), hLift(e));
}

TEST(Flip, DoubleTangentSwapsTheTwoGradings) {
  DVS d = doubleTangent(1), f = flipTotal(d);
  EXPECT_EQ(evaluate(d.hAction, 5), Matrix::diagonal({1, 5, 1, 5}));
  EXPECT_EQ(evaluate(d.vAction, 5), Matrix::diagonal({1, 1, 5, 5}));
  EXPECT_EQ(evaluate(f.hAction, 5), evaluate(d.vAction, 5));
  EXPECT_EQ(evaluate(f.vAction, 5), evaluate(d.hAction, 5));
}

TEST(Flip, ConjugatesLiftedMaps) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Graded e1 = gradedBundle(rng, "E1", upTo(rng, 2), upTo(rng, 2));
    Graded e2 = gradedBundle(rng, "E2", upTo(rng, 2), upTo(rng, 2));
    Matrix phi = blockMatrix(e1, e2, {{{0, 0}, rng.matrix(e2.pieces[0], e1.pieces[0])},
                                      {{1, 1}, rng.matrix(e2.pieces[1], e1.pieces[1])}});
    DVBMap h = liftMapH(phi, e1.space.vb(), e2.space.vb());
    ASSERT_TRUE(isDVBMap(h));
    DVBMap flipped = flipOfMap(h);
    DVBMap v = liftMapV(phi, e1.space.vb(), e2.space.vb());
    ASSERT_EQ(flipped.source, v.source);
    ASSERT_EQ(flipped.target, v.target);
    ASSERT_EQ(flipped.map, v.map);
  }
}

TEST(Flip, CompositesWithDvbMapsStayFlips) {
  DVS d = doubleTangent(1);
  FlipMap f = totalFlip(d);
  DVBMap g{f.target, f.target, Matrix::diagonal({2, 3, 5, 7})};
  ASSERT_TRUE(isDVBMap(g));
  EXPECT_TRUE(isFlipMap(compose(g, f)));
  DVBMap g0{d, d, Matrix::diagonal({2, 3, 5, 7})};
  EXPECT_TRUE(isFlipMap(compose(f, g0)));
  EXPECT_TRUE(isDVBMap(compose(f, inverse(f))));
}

TEST(Surmersions, FlipIntertwinesThemForSymmetricSpaces) {
  Presented ttm = doubleTangentOfLine();
  DVS d = ttm.dvs();
  auto [ph, pv] = canonicalSurmersions(d);
  EXPECT_TRUE(isDVBMap(ph));
  EXPECT_TRUE(isDVBMap(pv));
  // TTQ is symmetric through kappa: both sides are TQ and pi^v kappa = pi^h
  EXPECT_EQ(sideBundleA(d).bundle, sideBundleB(d).bundle);
  Matrix k = kappa(ttm, "x");
  EXPECT_TRUE(isFlipMap(d, d, k));
  EXPECT_EQ(pv.map * k, ph.map);
  DVBMap flipped = flipOfMap(ph);
  EXPECT_EQ(flipped.source, flipTotal(d));
  EXPECT_EQ(flipped.target, vLift(sideBundleA(d).bundle));
}

TEST(Surmersions, RankZeroLift) {
  VBSpace e = makeBundle(trivialAction(3));
  DVS h = hLift(e);
  EXPECT_EQ(h.base().rank(), 3u);
  EXPECT_EQ(h.coreRank(), 0u);
}

TEST(FiberProduct, IdentityCospanIsDiagonal) {
  Presented d = primitive("D", doubleTangent(1));
  Matrix id = Matrix::identity(4);
  PresentedFiberProduct fp = fiberProductDVB(withPrefix(d, "1:"), id, withPrefix(d, "2:"), id, d);
  EXPECT_EQ(fp.P.dim(), 4u);
  EXPECT_EQ(fp.P.amb.dim(), 8u);
  EXPECT_EQ(fp.P.dvs(), d.dvs());
}

TEST(FiberProduct, DimensionAlongSurmersion) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    Graded d = gradedDVS(rng, "D", {1, 1, 1, 1});
    Graded d1 = gradedDVS(rng, "D1", {1, 1, 1, 1});
    auto [ph, pv] = canonicalSurmersions(d.space.dvs());
    // D1 -> A^h arbitrary, D -> A^h the surmersion: dim = dim D1 + dim D - dim A
    Presented a = primitive("A", ph.target);
    Matrix f1 = ph.map * blockMatrix(d1, d, {{{0, 0}, rng.matrix(1, 1)}, {{1, 1}, rng.matrix(1, 1)}});
    PresentedFiberProduct fp = fiberProductDVB(d1.space, f1, primitive("Dd", d.space.dvs()), ph.map, a);
    ASSERT_EQ(fp.P.dim(), 4u + 4u - 2u);
  }
}

TEST(SidePullback, AlongTheSideItselfIsIsomorphic) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Graded g = gradedDVS(rng, "D", {upTo(rng, 2), upTo(rng, 2), upTo(rng, 2), upTo(rng, 2)});
    const Presented& d = g.space;
    Presented a = restrictTo(d, image(d.projection(0, 0)));
    a.actions.erase(a.actions.begin());
    a.amb.actions.erase(a.amb.actions.begin());
    Matrix inc = d.coord * a.lift;
    PresentedFiberProduct pb = sidePullbackH(withPrefix(a, "side:"), inc, d);
    ASSERT_EQ(pb.P.dim(), d.dim());
    ASSERT_TRUE(isBijective(pb.pr2));
    ASSERT_TRUE(isDVBMap(pb.P.dvs(), d.dvs(), pb.pr2));
  }
}

TEST(SidePullback, DimensionFormula) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<size_t> pieces{upTo(rng, 2), upTo(rng, 2), upTo(rng, 2), upTo(rng, 2)};
    Graded d = gradedDVS(rng, "D", pieces);
    Graded e = gradedBundle(rng, "E", upTo(rng, 2), upTo(rng, 2));
    // a vb-map E -> side A: base to base, fiber to A-fiber
    Matrix phi = blockMatrix(e, d, {{{0, 0}, rng.matrix(pieces[0], e.pieces[0])},
                                    {{1, 1}, rng.matrix(pieces[1], e.pieces[1])}});
    PresentedFiberProduct pb = sidePullbackH(e.space, phi, d.space);
    ASSERT_EQ(pb.P.dim(), e.dim() + pieces[2] + pieces[3]);
    ASSERT_TRUE(isValidDVS(pb.P.dvs()));
    ASSERT_TRUE(piecesComplete(pb.P.dvs()));
  }
}

TEST(SidePullback, RejectsMapsLeavingTheSide) {
  Presented d = primitive("D", doubleTangent(1));
  Presented e = primitive("E", tangentBundle(1).action.ambientDim, {tangentBundle(1).action});
  Matrix bad(4, 2);
  bad(3, 1) = 1;  // into the core
  EXPECT_THROW(sidePullbackH(e, bad, d), CompatibilityError);
}

TEST(SidePullback, IdentityTwoMapGivesTheMapBack) {
  Rng rng(7);
  Graded d = gradedDVS(rng, "D", {1, 1, 1, 1});
  Graded e = gradedBundle(rng, "E", 1, 1);
  Matrix phi = blockMatrix(e, d, {{{0, 0}, Matrix{{2}}}, {{1, 1}, Matrix{{-1}}}});
  PresentedFiberProduct pb = sidePullbackH(e.space, phi, d.space);
  Matrix m = sidePullbackMap(pb, pb, Matrix::identity(e.dim()), Matrix::identity(d.dim()));
  EXPECT_TRUE(m.isIdentity());
}

TEST(Sharpening, TriangleCommutes) {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    Graded d1 = gradedDVS(rng, "D1", {1, 1, 1, 1});
    Graded d2 = gradedDVS(rng, "D2", {1, 2, 1, 1});
    Blocks blocks;
    for (size_t k = 0; k < 4; ++k) blocks[{k, k}] = rng.matrix(d2.pieces[k], d1.pieces[k]);
    Matrix phi = blockMatrix(d1, d2, blocks);
    Sharpening s = sharpen(d1.space, phi, d2.space, Orientation::Horizontal);
    ASSERT_EQ(s.target.pr2 * s.map, phi);
    ASSERT_TRUE(isDVBMap(d1.space.dvs(), s.target.P.dvs(), s.map));
  }
}

TEST(VBObject, DoubleTangentHorizontal) {
  DVS d = doubleTangent(1);
  VBObject o = vbObjectFromDVS(d, Orientation::Horizontal);
  EXPECT_FALSE(vbObjectViolation(o));
  EXPECT_EQ(o.tau, d.hAction);
  EXPECT_EQ(dvsFromVBObject(o), d);
}

TEST(VBObject, LiftIsTheZeroObject) {
  VBSpace e = tangentBundle(2);
  VBObject o = vbObjectFromDVS(hLift(e), Orientation::Horizontal);
  // the embedded bundle is all of the carrier
  EXPECT_TRUE(isBijective(o.j));
}

TEST(VBObject, RoundTripOnRandomSpaces) {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    DVS d = randomDVS(rng);
    for (auto o : {Orientation::Horizontal, Orientation::Vertical})
      ASSERT_EQ(dvsFromVBObject(vbObjectFromDVS(d, o)), d);
  }
}

TEST(VBObject, ViolationsAreLabelled) {
  VBObject o = vbObjectFromDVS(doubleTangent(1), Orientation::Horizontal);
  o.tau = o.carrier.action;  // fixed points no longer the image of j
  EXPECT_TRUE(vbObjectViolation(o).has_value());
  EXPECT_THROW(dvsFromVBObject(o), CompatibilityError);
}

TEST(Quotient, ZeroAndWholeSubobjects) {
  Rng rng(10);
  Graded g = gradedDVS(rng, "D", {1, 1, 2, 1});
  const Presented& d = g.space;
  // Q = side A only: nothing quotiented
  Presented side = restrictTo(d, image(d.projection(0, 0)));
  Matrix inc = d.coord * side.lift;
  PresentedQuotient q0 = quotientH(d, inc, side);
  EXPECT_EQ(q0.X.dim(), d.dim());
  // Q = D: quotient is the side, as E^h
  PresentedQuotient q1 = quotientH(d, d.identity(), d);
  EXPECT_EQ(q1.X.dim(), g.pieces[0] + g.pieces[1]);
  EXPECT_EQ(q1.X.dvs().coreRank(), 0u);
}

TEST(Quotient, DimensionFormulaAndCokernelProperty) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    PullbackQuotientSample s = pullbackQuotientSample(rng);
    if (s.orientation == Orientation::Vertical) continue;
    PresentedQuotient q = quotientH(s.d.space, s.iota, s.q.space);
    const size_t sideA = s.d.pieces[0] + s.d.pieces[1];
    ASSERT_EQ(q.X.dim(), s.d.dim() - s.q.dim() + sideA);
    ASSERT_TRUE(isDVBMap(s.d.space.dvs(), q.X.dvs(), q.quot));
    // a competitor killing the fibers of Q factors uniquely through quot
    Matrix competitor = rng.matrix(2, q.X.dim(), 2) * q.quot;
    Matrix f = descend(competitor, q.quot, Matrix::identity(2));
    ASSERT_EQ(f * q.quot, competitor);
  }
}

TEST(Quotient, NonWideEmbeddingRejected) {
  Presented d = primitive("D", doubleTangent(1));
  Presented core = restrictTo(d, image(d.projection(0, 1) * d.projection(1, 1)));
  EXPECT_THROW(quotientH(d, d.coord * core.lift, core), CompatibilityError);
}

TEST(QuotientMap, IdentityZeroAndComposites) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    PullbackQuotientSample s = pullbackQuotientSample(rng);
    if (s.orientation == Orientation::Vertical) continue;
    PresentedQuotient q = quotientH(s.d.space, s.iota, s.q.space);
    Matrix id = quotientDVBMap(s.d.space.identity(), s.q.space.identity(), s.iota, s.iota, q, q);
    ASSERT_TRUE(id.isIdentity());
    // the dvb-automorphism 2 of D and Q descends to 2 on the quotient, twice to 4
    Matrix two = quotientDVBMap(Rational(2) * s.d.space.identity(), Rational(2) * s.q.space.identity(), s.iota,
                                s.iota, q, q);
    Matrix four = quotientDVBMap(Rational(4) * s.d.space.identity(), Rational(4) * s.q.space.identity(), s.iota,
                                 s.iota, q, q);
    ASSERT_EQ(two * two, four);
    Matrix zero = quotientDVBMap(Matrix(s.d.dim(), s.d.dim()), Matrix(s.q.dim(), s.q.dim()), s.iota, s.iota, q, q);
    ASSERT_TRUE(zero.isZero());
  }
}

TEST(QuotientFlip, TotalFlipOfQuotientIsQuotientOfTotalFlip) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    QuotientFlipSample s = quotientFlipSample(rng);
    PresentedQuotient qv = quotientV(s.d1.space, s.iota1, s.p1.space);
    PresentedQuotient qh = quotientH(s.flipD1, s.iota1, s.flipP1);
    Matrix f = quotientFlip(s.d1.space.identity(), s.p1.space.identity(), s.iota1, s.iota1, qv, qh);
    ASSERT_TRUE(f.isIdentity());
    ASSERT_EQ(qh.X.dvs(), flipTotal(qv.X.dvs()));
  }
}

TEST(QuotientFlip, ZeroSubobjectGivesTheFlipBack) {
  Presented d = primitive("D", doubleTangent(1));
  Presented side = restrictTo(d, image(d.projection(1, 0)));
  Matrix inc = d.coord * side.lift;
  PresentedQuotient qv = quotientV(d, inc, side);
  PresentedQuotient qh = quotientH(swapActions(d), inc, swapActions(side));
  Matrix f = quotientFlip(d.identity(), side.identity(), inc, inc, qv, qh);
  EXPECT_TRUE(f.isIdentity());
  EXPECT_EQ(f.rows(), 4u);
}

TEST(QuotientFlip, MixedQuotientCompositionLaw) {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    QuotientFlipSample s = quotientFlipSample(rng);
    PresentedQuotient q1 = quotientV(s.d1.space, s.iota1, s.p1.space);
    PresentedQuotient qf = quotientH(s.flipD1, s.iota1, s.flipP1);
    PresentedQuotient q2 = quotientH(s.d2.space, s.iota2, s.p2.space);
    Matrix flips = quotientFlip(s.flipD, s.flipP, s.iota1, s.iota1, q1, qf);
    Matrix maps = quotientDVBMap(s.phi, s.psi, s.iota1, s.iota2, qf, q2);
    Matrix direct = quotientFlip(s.phi * s.flipD, s.psi * s.flipP, s.iota1, s.iota2, q1, q2);
    ASSERT_EQ(maps * flips, direct);
  }
}

TEST(PullbackFlip, FlipLemmaOnDoubleTangents) {
  // Upsilon = kappa on TTQ^n, pulled back along a map into the common side
  for (size_t n = 1; n <= 2; ++n) {
    Presented ttm = tangent(tangent(plainSpace("x", n), "u"), "t");
    Matrix k = kappa(ttm, "x");
    Presented side = restrictTo(ttm, image(ttm.projection(0, 0)));
    side.actions.erase(side.actions.begin());
    side.amb.actions.erase(side.amb.actions.begin());
    Matrix inc = ttm.coord * side.lift;
    PullbackFlip pf = pullbackFlip(withPrefix(side, "side:"), inc, ttm, k * inc, ttm, k, Orientation::Horizontal);
    EXPECT_TRUE(isBijective(pf.map));
    EXPECT_TRUE(isFlipMap(pf.source.P.dvs(), pf.target.P.dvs(), pf.map));
  }
}

TEST(PullbackQuotient, CanonicalIsoIsDvbIso) {
  Rng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    PullbackQuotientSample s = pullbackQuotientSample(rng);
    PullbackQuotientIso r = pullbackQuotientIso(s.u.space, s.v.space, s.k, s.d.space, s.q.space, s.iota, s.phi,
                                                s.psi, s.orientation);
    ASSERT_TRUE(isBijective(r.iso));
    ASSERT_TRUE(isDVBMap(r.lhs.X.dvs(), r.rhs.P.dvs(), r.iso));
  }
}
