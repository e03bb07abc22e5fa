#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "dvbsym/linalg.hpp"
#include "dvbsym/rng.hpp"

using namespace dvbsym;

namespace {

// floating-point rank of a small integer matrix, used as an independent oracle
size_t eigenRank(const Matrix& m) {
  if (m.empty()) return 0;
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j).toDouble();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(e);
  lu.setThreshold(1e-9);
  return static_cast<size_t>(lu.rank());
}

Matrix lowRank(Rng& rng, size_t r, size_t c, size_t k) { return rng.matrix(r, k, 3) * rng.matrix(k, c, 3); }

}  // namespace

TEST(Rref, CanonicalForm) {
  Matrix m{{2, 4, 6}, {1, 2, 4}};
  auto [r, piv] = rref(m);
  EXPECT_EQ(r, (Matrix{{1, 2, 0}, {0, 0, 1}}));
  EXPECT_EQ(piv, (std::vector<size_t>{0, 2}));
}

TEST(Rank, MatchesFloatingPointOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    size_t r = 1 + rng.index(6), c = 1 + rng.index(6), k = rng.index(std::min(r, c) + 1);
    Matrix m = lowRank(rng, r, c, k);
    ASSERT_EQ(rank(m), eigenRank(m)) << m;
    ASSERT_EQ(rank(m) + kernel(m).rank(), c);
  }
}

TEST(Subspace, SumIntersectionDimensionFormula) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 1 + rng.index(6);
    Subspace a = image(lowRank(rng, n, 1 + rng.index(n), 1 + rng.index(n)));
    Subspace b = image(lowRank(rng, n, 1 + rng.index(n), 1 + rng.index(n)));
    Subspace s = sum(a, b), i = intersection(a, b);
    ASSERT_EQ(s.rank() + i.rank(), a.rank() + b.rank());
    ASSERT_TRUE(s.contains(a) && s.contains(b));
    ASSERT_TRUE(a.contains(i) && b.contains(i));
  }
}

TEST(Subspace, EqualityIsOfSpansNotGenerators) {
  Matrix g1{{1, 0}, {1, 1}, {0, 1}};
  Matrix g2{{1, 1}, {2, 1}, {1, 0}};
  EXPECT_EQ(image(g1), image(g2));
  EXPECT_NE(image(g1), Subspace::full(3));
}

TEST(Solve, InverseAndSystems) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    size_t n = 1 + rng.index(5);
    Matrix u = rng.unimodular(n, 4);
    ASSERT_TRUE((inverse(u) * u).isIdentity());
    Matrix x = rng.matrix(n, 2, 4);
    ASSERT_EQ(solve(u, u * x), x);
  }
  EXPECT_THROW(inverse(Matrix{{1, 2}, {2, 4}}), std::exception);
}

TEST(Quotient, ProjectionSectionSplitting) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    size_t n = 1 + rng.index(6);
    Subspace s = image(lowRank(rng, n, 2, 1 + rng.index(2)));
    QuotientPresentation q = quotient(n, s);
    ASSERT_EQ(q.quotientDim + s.rank(), n);
    ASSERT_TRUE((q.projection * q.section).isIdentity());
    ASSERT_TRUE((q.projection * s.inclusion()).isZero());
    ASSERT_TRUE(isExactAt(s.inclusion(), q.projection));
  }
}

TEST(Quotient, CallerSectionMustBeComplement) {
  Subspace s = image(Matrix{{1}, {0}});
  EXPECT_THROW(quotientWithSection(s, Matrix{{1}, {0}}), CompatibilityError);
  auto q = quotientWithSection(s, Matrix{{1}, {1}});
  EXPECT_TRUE((q.projection * Matrix{{1}, {1}}).isIdentity());
}

TEST(FiberProduct, UniversalProperty) {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix f = rng.matrix(3, 2, 3), g = rng.matrix(3, 2, 3);
    FiberProduct fp = fiberProduct(f, g);
    ASSERT_EQ(f * fp.pr1, g * fp.pr2);
    // any (u, v) with f u = g v is a column combination of P
    Matrix w = fp.P.inclusion() * rng.matrix(fp.P.rank(), 2, 3);
    Matrix u = w.rowRange(0, 2), v = w.rowRange(2, 4);
    Matrix k = factorThrough(fp, u, v);
    ASSERT_EQ(fp.pr1 * k, u);
    ASSERT_EQ(fp.pr2 * k, v);
  }
}

TEST(Exactness, ShortExactSequences) {
  Matrix inc{{1}, {0}}, proj{{0, 1}};
  EXPECT_TRUE(isExactAt(inc, proj));
  EXPECT_FALSE(isExactAt(inc, Matrix{{1, 1}}));
  EXPECT_THROW(isExactAt(inc, Matrix{{1, 1, 1}}), DimensionError);
}

TEST(Matrix, ShapeErrors) {
  EXPECT_THROW(Matrix(2, 3) * Matrix(2, 3), DimensionError);
  EXPECT_THROW(Matrix(2, 3) + Matrix(3, 2), DimensionError);
  EXPECT_EQ(hstack({Matrix{{1}}, Matrix{{2}}}), (Matrix{{1, 2}}));
  EXPECT_EQ(blockDiag({Matrix{{1}}, Matrix{{2}}}), (Matrix{{1, 0}, {0, 2}}));
}
