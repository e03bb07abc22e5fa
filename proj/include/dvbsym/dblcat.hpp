#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "rng.hpp"

namespace dvbsym {

// A small category C => C0 given by its structure maps.
template <class Ob, class Mor>
struct Category {
  std::function<Ob(const Mor&)> source, range;
  std::function<Mor(const Ob&)> identity;
  std::function<Mor(const Mor&, const Mor&)> compose;  // compose(g, f) = g after f
  std::function<bool(const Ob&, const Ob&)> eqOb;
  std::function<bool(const Mor&, const Mor&)> eqMor;

  bool composable(const Mor& g, const Mor& f) const { return eqOb(range(f), source(g)); }
};

// Strict double category (D, H, V, B). Squares have top/bottom in H and left/right in V:
//   s^D_H = top, r^D_H = bottom, s^D_V = left, r^D_V = right.
// hComp(d1, d2) = d1 o d2 puts d2 on the left; vComp(d1, d3) = d1 . d3 puts d3 on top.
template <class B, class H, class V, class D>
struct DoubleCategory {
  Category<B, H> horizontal;
  Category<B, V> vertical;
  Category<H, D> overH;  // squares over horizontal edges, composed vertically
  Category<V, D> overV;  // squares over vertical edges, composed horizontally

  D hComp(const D& d1, const D& d2) const {
    if (!overV.composable(d1, d2)) throw CompatibilityError("hCompose: squares do not share a vertical edge");
    return overV.compose(d1, d2);
  }
  D vComp(const D& d1, const D& d3) const {
    if (!overH.composable(d1, d3)) throw CompatibilityError("vCompose: squares do not share a horizontal edge");
    return overH.compose(d1, d3);
  }
};

template <class B, class H, class V, class D>
DoubleCategory<B, V, H, D> flipDoubleCategory(const DoubleCategory<B, H, V, D>& c) {
  return {c.vertical, c.horizontal, c.overV, c.overH};
}

// The two readings of squares as directed 2-morphisms.
template <class Base, class Edge, class D>
struct InternalCategory {
  Category<Edge, D> morphisms;
  Category<Base, Edge> objects;
};

template <class B, class H, class V, class D>
InternalCategory<B, V, D> horizontalization(const DoubleCategory<B, H, V, D>& c) {
  return {c.overV, c.horizontal};
}

template <class B, class H, class V, class D>
InternalCategory<B, H, D> verticalization(const DoubleCategory<B, H, V, D>& c) {
  return {c.overH, c.vertical};
}

// --- law checks -------------------------------------------------------------------------

struct LawReport {
  std::string axiom;
  size_t trials = 0;
  size_t failures = 0;
  std::optional<std::string> firstWitness;

  void record(bool ok, const std::string& witness) {
    ++trials;
    if (ok) return;
    ++failures;
    if (!firstWitness) firstWitness = witness;
  }
  bool pass() const { return failures == 0 && trials > 0; }
};

// the four corner identities ("elements of D are squares")
template <class B, class H, class V, class D>
bool checkAxiom5(const DoubleCategory<B, H, V, D>& c, const D& d) {
  const auto &h = c.horizontal, &v = c.vertical;
  const auto &oH = c.overH, &oV = c.overV;
  return h.eqOb(v.source(oV.source(d)), h.source(oH.source(d))) &&  // top left
         h.eqOb(v.range(oV.range(d)), h.range(oH.range(d))) &&      // bottom right
         h.eqOb(h.source(oH.range(d)), v.range(oV.source(d))) &&     // bottom left
         h.eqOb(v.source(oV.range(d)), h.range(oH.source(d)));       // top right
}

// d1 o d2 against the edges, for a horizontally composable pair
template <class B, class H, class V, class D>
bool checkFunctorialityH(const DoubleCategory<B, H, V, D>& c, const D& d1, const D& d2) {
  D d = c.hComp(d1, d2);
  const auto& h = c.horizontal;
  const auto& oH = c.overH;
  return h.eqMor(oH.range(d), h.compose(oH.range(d1), oH.range(d2))) &&
         h.eqMor(oH.source(d), h.compose(oH.source(d1), oH.source(d2)));
}

// d1 . d3 against the edges, for a vertically composable pair
template <class B, class H, class V, class D>
bool checkFunctorialityV(const DoubleCategory<B, H, V, D>& c, const D& d1, const D& d3) {
  D d = c.vComp(d1, d3);
  const auto& v = c.vertical;
  const auto& oV = c.overV;
  return v.eqMor(oV.range(d), v.compose(oV.range(d1), oV.range(d3))) &&
         v.eqMor(oV.source(d), v.compose(oV.source(d1), oV.source(d3)));
}

// identity squares of composites are composites of identity squares
template <class B, class H, class V, class D>
bool checkIdentityFunctoriality(const DoubleCategory<B, H, V, D>& c, const H& g, const H& f, const V& k,
                                const V& l) {
  const auto &oH = c.overH, &oV = c.overV;
  bool okH = oH.eqMor(oH.identity(c.horizontal.compose(g, f)), c.hComp(oH.identity(g), oH.identity(f)));
  bool okV = oV.eqMor(oV.identity(c.vertical.compose(k, l)), c.vComp(oV.identity(k), oV.identity(l)));
  return okH && okV;
}

// unit laws for identity squares on both sides, in both directions
template <class B, class H, class V, class D>
bool checkUnits(const DoubleCategory<B, H, V, D>& c, const D& d) {
  const auto &oH = c.overH, &oV = c.overV;
  return oV.eqMor(c.hComp(d, oV.identity(oV.source(d))), d) && oV.eqMor(c.hComp(oV.identity(oV.range(d)), d), d) &&
         oH.eqMor(c.vComp(d, oH.identity(oH.source(d))), d) && oH.eqMor(c.vComp(oH.identity(oH.range(d)), d), d);
}

// (d1 o d2) . (d3 o d4) = (d1 . d3) o (d2 . d4); throws when the grid is not composable
template <class B, class H, class V, class D>
bool checkInterchange(const DoubleCategory<B, H, V, D>& c, const D& d1, const D& d2, const D& d3, const D& d4) {
  if (!c.overV.composable(d1, d2) || !c.overV.composable(d3, d4) || !c.overH.composable(d1, d3) ||
      !c.overH.composable(d2, d4))
    throw CompatibilityError("checkInterchange: grid is not composable");
  D rowsFirst = c.vComp(c.hComp(d1, d2), c.hComp(d3, d4));
  D columnsFirst = c.hComp(c.vComp(d1, d3), c.vComp(d2, d4));
  return c.overH.eqMor(rowsFirst, columnsFirst);
}

// --- LinSq: commutative squares of linear maps -------------------------------------------

// bottom left = right top, with top: TL -> TR, left: TL -> BL, right: TR -> BR, bottom: BL -> BR
struct LinSquare {
  Matrix top, bottom, left, right;

  friend bool operator==(const LinSquare& a, const LinSquare& b) {
    return a.top == b.top && a.bottom == b.bottom && a.left == b.left && a.right == b.right;
  }
};

inline bool commutes(const LinSquare& s) {
  return s.top.rows() == s.right.cols() && s.left.rows() == s.bottom.cols() && s.top.cols() == s.left.cols() &&
         s.right.rows() == s.bottom.rows() && s.bottom * s.left == s.right * s.top;
}

inline LinSquare checkedSquare(LinSquare s) {
  if (!commutes(s)) throw CompatibilityError("LinSq: edges do not form a commuting square");
  return s;
}

// reading a square with its horizontal and vertical edges exchanged
inline LinSquare transpose(const LinSquare& s) { return {s.left, s.right, s.top, s.bottom}; }

using LinSq = DoubleCategory<size_t, Matrix, Matrix, LinSquare>;

inline Category<size_t, Matrix> linCategory() {
  Category<size_t, Matrix> c;
  c.source = [](const Matrix& f) { return f.cols(); };
  c.range = [](const Matrix& f) { return f.rows(); };
  c.identity = [](size_t n) { return Matrix::identity(n); };
  c.compose = [](const Matrix& g, const Matrix& f) {
    if (g.cols() != f.rows()) throw CompatibilityError("compose: " + g.shape() + " after " + f.shape());
    return g * f;
  };
  c.eqOb = [](size_t a, size_t b) { return a == b; };
  c.eqMor = [](const Matrix& a, const Matrix& b) { return a == b; };
  return c;
}

inline LinSq linSq() {
  LinSq c;
  c.horizontal = linCategory();
  c.vertical = linCategory();
  c.overH.source = [](const LinSquare& s) { return s.top; };
  c.overH.range = [](const LinSquare& s) { return s.bottom; };
  c.overH.identity = [](const Matrix& h) {
    return LinSquare{h, h, Matrix::identity(h.cols()), Matrix::identity(h.rows())};
  };
  c.overH.compose = [](const LinSquare& lower, const LinSquare& upper) {
    return checkedSquare({upper.top, lower.bottom, lower.left * upper.left, lower.right * upper.right});
  };
  c.overH.eqOb = [](const Matrix& a, const Matrix& b) { return a == b; };
  c.overH.eqMor = [](const LinSquare& a, const LinSquare& b) { return a == b; };
  c.overV.source = [](const LinSquare& s) { return s.left; };
  c.overV.range = [](const LinSquare& s) { return s.right; };
  c.overV.identity = [](const Matrix& v) {
    return LinSquare{Matrix::identity(v.cols()), Matrix::identity(v.rows()), v, v};
  };
  c.overV.compose = [](const LinSquare& rightSq, const LinSquare& leftSq) {
    return checkedSquare({rightSq.top * leftSq.top, rightSq.bottom * leftSq.bottom, leftSq.left, rightSq.right});
  };
  c.overV.eqOb = c.overH.eqOb;
  c.overV.eqMor = c.overH.eqMor;
  return c;
}

// LinSq with squares stored transposed, so that its horizontal edges are the stored
// vertical ones. Agrees with flipDoubleCategory(linSq()) up to `transpose`.
inline LinSq linSqTransposed() {
  LinSq base = linSq();
  LinSq c = base;
  auto viaT = [](std::function<Matrix(const LinSquare&)> f) {
    return [f](const LinSquare& s) { return f(transpose(s)); };
  };
  c.overH.source = viaT(base.overV.source);
  c.overH.range = viaT(base.overV.range);
  c.overH.identity = [base](const Matrix& h) { return transpose(base.overV.identity(h)); };
  c.overH.compose = [base](const LinSquare& a, const LinSquare& b) {
    return transpose(base.overV.compose(transpose(a), transpose(b)));
  };
  c.overV.source = viaT(base.overH.source);
  c.overV.range = viaT(base.overH.range);
  c.overV.identity = [base](const Matrix& v) { return transpose(base.overH.identity(v)); };
  c.overV.compose = [base](const LinSquare& a, const LinSquare& b) {
    return transpose(base.overH.compose(transpose(a), transpose(b)));
  };
  return c;
}

// Squares of a flat double category are determined by their edges: a second square
// with the same edges is rejected.
class FlatSquareSet {
 public:
  bool insert(const LinSquare& s) {
    checkedSquare(s);
    return keys_.insert(key(s)).second;
  }
  size_t size() const { return keys_.size(); }

 private:
  static std::string key(const LinSquare& s) {
    std::ostringstream os;
    os << s.top << '|' << s.bottom << '|' << s.left << '|' << s.right << '|' << s.top.shape() << s.bottom.shape()
       << s.left.shape() << s.right.shape();
    return os.str();
  }
  std::set<std::string> keys_;
};

// --- samplers ----------------------------------------------------------------------------

// Commuting grid of linear maps on (rows x cols) vertices. Vertex v is B_v P_v with
// P_v: Q^n -> Q^n / K_v for a nested family K_v, so every path between two vertices
// composes to the same map.
struct LinGrid {
  size_t rows = 0, cols = 0;
  std::vector<std::vector<size_t>> dims;
  std::vector<std::vector<Matrix>> right;  // (r, c) -> (r, c+1)
  std::vector<std::vector<Matrix>> down;   // (r, c) -> (r+1, c)

  LinSquare square(size_t r, size_t c) const {
    return {right[r][c], right[r + 1][c], down[r][c], down[r][c + 1]};
  }
};

inline LinGrid randomLinGrid(Rng& rng, size_t rows, size_t cols, size_t maxDim = 3) {
  const size_t n = 1 + rng.index(maxDim);
  std::vector<size_t> a(rows), b(cols);
  for (size_t r = 0; r < rows; ++r) a[r] = (r ? a[r - 1] : 0) + rng.index(2);
  for (size_t c = 0; c < cols; ++c) b[c] = (c ? b[c - 1] : 0) + rng.index(2);
  Matrix flag = rng.unimodular(n);
  LinGrid g;
  g.rows = rows;
  g.cols = cols;
  g.dims.assign(rows, std::vector<size_t>(cols));
  std::vector<std::vector<Matrix>> embed(rows, std::vector<Matrix>(cols)), pull(rows, std::vector<Matrix>(cols));
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) {
      size_t k = std::min(n, a[r] + b[c]);
      QuotientPresentation q = quotient(n, Subspace::fromColumns(flag.colRange(0, k)));
      size_t extra = rng.index(2);
      Matrix B = rng.injective(q.quotientDim + extra, q.quotientDim);
      Matrix C = solve(B.transpose() * B, B.transpose());  // left inverse of B
      g.dims[r][c] = B.rows();
      embed[r][c] = B * q.projection;
      pull[r][c] = q.section * C;
    }
  g.right.assign(rows, std::vector<Matrix>(cols > 0 ? cols - 1 : 0));
  g.down.assign(rows > 0 ? rows - 1 : 0, std::vector<Matrix>(cols));
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c + 1 < cols; ++c) g.right[r][c] = embed[r][c + 1] * pull[r][c];
  for (size_t r = 0; r + 1 < rows; ++r)
    for (size_t c = 0; c < cols; ++c) g.down[r][c] = embed[r + 1][c] * pull[r][c];
  return g;
}

inline LinSquare randomLinSquare(Rng& rng, size_t maxDim = 3) { return randomLinGrid(rng, 2, 2, maxDim).square(0, 0); }

// --- law suite -------------------------------------------------------------------------------

inline std::string describe(const LinSquare& s) {
  std::ostringstream os;
  os << "top " << s.top.shape() << ", left " << s.left.shape() << ", right " << s.right.shape() << ", bottom "
     << s.bottom.shape();
  return os.str();
}

// Seeded law checks on LinSq: interchange on 2x2 grids, axiom (5), functoriality and
// units on every generated square, and the flip involution.
inline std::vector<LawReport> linSqLaws(uint64_t seed, size_t trials, size_t maxDim = 3) {
  Rng rng(seed);
  LinSq c = linSq();
  auto ff = flipDoubleCategory(flipDoubleCategory(c));
  LinSq t = linSqTransposed();
  auto fl = flipDoubleCategory(c);
  auto hz = horizontalization(fl);
  auto vt = verticalization(c);
  LawReport interchange{"interchange", 0, 0, {}}, axiom5{"axiom 5", 0, 0, {}}, funct{"functoriality", 0, 0, {}},
      units{"units", 0, 0, {}},
      assoc{"associativity", 0, 0, {}}, involution{"flip involution", 0, 0, {}}, flipReading{"flip reading", 0, 0, {}};
  for (size_t trial = 0; trial < trials; ++trial) {
    LinGrid g = randomLinGrid(rng, 3, 4, maxDim);
    const LinSquare d1 = g.square(1, 1), d2 = g.square(1, 0), d3 = g.square(0, 1), d4 = g.square(0, 0);
    const std::string w = "trial " + std::to_string(trial);
    interchange.record(checkInterchange(c, d1, d2, d3, d4), w + ": " + describe(d1));
    for (size_t r = 0; r < 2; ++r)
      for (size_t col = 0; col < 3; ++col) {
        LinSquare d = g.square(r, col);
        axiom5.record(checkAxiom5(c, d) && checkAxiom5(fl, d), w + ": " + describe(d));
        units.record(checkUnits(c, d), w + ": " + describe(d));
        bool inv = c.overH.eqOb(ff.overH.source(d), c.overH.source(d)) &&
                   c.overH.eqOb(ff.overH.range(d), c.overH.range(d)) &&
                   c.overV.eqOb(ff.overV.source(d), c.overV.source(d)) &&
                   c.overV.eqOb(ff.overV.range(d), c.overV.range(d)) && transpose(transpose(d)) == d;
        involution.record(inv, w + ": " + describe(d));
        // horizontal 2-morphisms of the flip are the vertical 2-morphisms of LinSq, and the
        // flip reads a stored square as the transposed instance reads its transpose
        bool reads = hz.morphisms.eqOb(hz.morphisms.source(d), vt.morphisms.source(d)) &&
                     hz.morphisms.eqOb(hz.morphisms.range(d), vt.morphisms.range(d)) &&
                     fl.overH.eqOb(fl.overH.source(d), t.overH.source(transpose(d))) &&
                     fl.overV.eqOb(fl.overV.range(d), t.overV.range(transpose(d)));
        flipReading.record(reads, w + ": " + describe(d));
      }
    involution.record(c.overV.eqMor(ff.hComp(d1, d2), c.hComp(d1, d2)) &&
                          c.overH.eqMor(ff.vComp(d1, d3), c.vComp(d1, d3)),
                      w + ": compositions");
    flipReading.record(hz.morphisms.eqMor(hz.morphisms.compose(d1, d3), vt.morphisms.compose(d1, d3)) &&
                           t.overV.eqMor(transpose(t.hComp(transpose(d1), transpose(d3))), c.vComp(d1, d3)),
                       w + ": compositions");
    funct.record(checkFunctorialityH(c, d1, d2) && checkFunctorialityV(c, d1, d3) &&
                     checkIdentityFunctoriality(c, g.right[0][1], g.right[0][0], g.down[1][0], g.down[0][0]),
                 w);
    bool assocOk = c.overV.eqMor(c.hComp(c.hComp(g.square(0, 2), g.square(0, 1)), g.square(0, 0)),
                                 c.hComp(g.square(0, 2), c.hComp(g.square(0, 1), g.square(0, 0))));
    LinGrid tall = randomLinGrid(rng, 4, 2, maxDim);
    assocOk = assocOk && c.overH.eqMor(c.vComp(c.vComp(tall.square(2, 0), tall.square(1, 0)), tall.square(0, 0)),
                                       c.vComp(tall.square(2, 0), c.vComp(tall.square(1, 0), tall.square(0, 0))));
    assoc.record(assocOk, w);
  }
  return {interchange, axiom5, funct, units, assoc, involution, flipReading};
}

}  // namespace dvbsym
