#pragma once

#include <cstdint>
#include <random>

#include "linalg.hpp"

namespace dvbsym {

// Seeded source of small exact test data. Reductions are done by hand so that a
// seed gives the same data on every standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  // uniform in [lo, hi]
  long integer(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<uint64_t>(hi - lo + 1)); }
  size_t index(size_t n) { return static_cast<size_t>(next() % n); }
  bool coin() { return next() & 1; }

  Rational rational(long range = 3) {
    return Rational(integer(-range, range), integer(1, 2));
  }

  Matrix matrix(size_t rows, size_t cols, long range = 3) {
    Matrix m(rows, cols);
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j) m(i, j) = integer(-range, range);
    return m;
  }

  // product of a permutation and a few integer shears
  Matrix unimodular(size_t n, int shears = -1) {
    Matrix g(n, n);
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    for (size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[index(i)]);
    for (size_t i = 0; i < n; ++i) g(perm[i], i) = 1;
    if (n < 2) return g;
    const int count = shears < 0 ? static_cast<int>(n) : shears;
    for (int s = 0; s < count; ++s) {
      size_t r = index(n), c = index(n - 1);
      if (c >= r) ++c;
      Matrix e = Matrix::identity(n);
      e(r, c) = integer(-2, 2);
      g = e * g;
    }
    return g;
  }

  Matrix injective(size_t rows, size_t cols) {
    if (cols > rows) throw DimensionError("Rng::injective: more columns than rows");
    for (;;) {
      Matrix m = matrix(rows, cols, 2);
      if (isInjective(m)) return m;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dvbsym
