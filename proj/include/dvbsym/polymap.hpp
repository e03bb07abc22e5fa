#pragma once

#include <map>
#include <vector>

#include "symmetry.hpp"

namespace dvbsym {

// Sparse multivariate polynomial: exponent vector -> coefficient, no zero coefficients.
class Polynomial {
 public:
  using Exponents = std::vector<unsigned>;

  explicit Polynomial(size_t arity = 0) : arity_(arity) {}

  static Polynomial constant(size_t arity, const Rational& c) {
    Polynomial p(arity);
    p.add(Exponents(arity, 0), c);
    return p;
  }
  static Polynomial variable(size_t arity, size_t k) {
    if (k >= arity) throw DimensionError("Polynomial::variable: index out of range");
    Exponents e(arity, 0);
    e[k] = 1;
    Polynomial p(arity);
    p.add(e, 1);
    return p;
  }

  size_t arity() const { return arity_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }

  void add(const Exponents& e, const Rational& c) {
    if (e.size() != arity_) throw DimensionError("Polynomial: exponent vector of length " + std::to_string(e.size()) +
                                                 ", arity " + std::to_string(arity_));
    Rational& slot = terms_[e];
    slot += c;
    if (sgn(slot) == 0) terms_.erase(e);
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
      unsigned s = 0;
      for (unsigned x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  Rational evaluate(const std::vector<Rational>& x) const {
    if (x.size() != arity_) throw DimensionError("Polynomial::evaluate: point of arity " + std::to_string(x.size()));
    Rational sum;
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (size_t k = 0; k < arity_; ++k)
        for (unsigned p = 0; p < e[k]; ++p) t *= x[k];
      sum += t;
    }
    return sum;
  }

  Polynomial derivative(size_t k) const {
    if (k >= arity_) throw DimensionError("Polynomial::derivative: index out of range");
    Polynomial d(arity_);
    for (const auto& [e, c] : terms_) {
      if (e[k] == 0) continue;
      Exponents f = e;
      --f[k];
      d.add(f, c * Rational(e[k]));
    }
    return d;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    requireSameArity(a, b);
    Polynomial r = a;
    for (const auto& [e, c] : b.terms_) r.add(e, c);
    return r;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    requireSameArity(a, b);
    Polynomial r(a.arity_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(a.arity_);
        for (size_t k = 0; k < a.arity_; ++k) e[k] = ea[k] + eb[k];
        r.add(e, ca * cb);
      }
    return r;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.arity_ == b.arity_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  // this(q_1, ..., q_n) for polynomials q_k of a common arity
  Polynomial substitute(const std::vector<Polynomial>& q) const {
    if (q.size() != arity_) throw DimensionError("Polynomial::substitute: expected " + std::to_string(arity_) + " inputs");
    const size_t m = q.empty() ? 0 : q[0].arity_;
    for (const auto& p : q)
      if (p.arity_ != m) throw DimensionError("Polynomial::substitute: inputs of different arity");
    Polynomial r(m);
    for (const auto& [e, c] : terms_) {
      Polynomial t = constant(m, c);
      for (size_t k = 0; k < arity_; ++k)
        for (unsigned p = 0; p < e[k]; ++p) t = t * q[k];
      r = r + t;
    }
    return r;
  }

 private:
  static void requireSameArity(const Polynomial& a, const Polynomial& b) {
    if (a.arity_ != b.arity_) throw DimensionError("Polynomial: arity mismatch");
  }

  size_t arity_;
  std::map<Exponents, Rational> terms_;
};

struct PolyMap {
  size_t inputArity = 0;
  std::vector<Polynomial> components;

  size_t outputArity() const { return components.size(); }
  friend bool operator==(const PolyMap& a, const PolyMap& b) {
    return a.inputArity == b.inputArity && a.components == b.components;
  }
};

inline void validate(const PolyMap& p) {
  for (const auto& c : p.components)
    if (c.arity() != p.inputArity) throw DimensionError("PolyMap: component arity differs from input arity");
}

inline PolyMap linearPolyMap(const Matrix& a) {
  PolyMap p{a.cols(), {}};
  for (size_t i = 0; i < a.rows(); ++i) {
    Polynomial c(a.cols());
    for (size_t j = 0; j < a.cols(); ++j) {
      Polynomial::Exponents e(a.cols(), 0);
      e[j] = 1;
      c.add(e, a(i, j));
    }
    p.components.push_back(c);
  }
  return p;
}

inline std::vector<Rational> evaluate(const PolyMap& p, const std::vector<Rational>& x) {
  validate(p);
  if (x.size() != p.inputArity) throw DimensionError("evaluate: point arity does not match the map");
  std::vector<Rational> y;
  for (const auto& c : p.components) y.push_back(c.evaluate(x));
  return y;
}

inline Matrix jacobian(const PolyMap& p, const std::vector<Rational>& x) {
  validate(p);
  if (x.size() != p.inputArity) throw DimensionError("jacobian: point arity does not match the map");
  Matrix j(p.outputArity(), p.inputArity);
  for (size_t r = 0; r < p.outputArity(); ++r)
    for (size_t c = 0; c < p.inputArity; ++c) j(r, c) = p.components[r].derivative(c).evaluate(x);
  return j;
}

inline bool isImmersionAt(const PolyMap& p, const std::vector<Rational>& x) { return isInjective(jacobian(p, x)); }

// q after p
inline PolyMap compose(const PolyMap& q, const PolyMap& p) {
  validate(p);
  validate(q);
  if (q.inputArity != p.outputArity()) throw DimensionError("compose: arities do not match");
  PolyMap r{p.inputArity, {}};
  for (const auto& c : q.components) r.components.push_back(c.substitute(p.components));
  return r;
}

struct PolySquare {
  PolyMap i1, i2, j1, j2;  // i1: M1 -> M2, j1: M1 -> N1, j2: M2 -> N2, i2: N1 -> N2
};

// Tangent square at m in M1: Jacobians at m, i1(m), j1(m).
inline ImmersionSquare linearizeSquareAt(const PolySquare& s, const std::vector<Rational>& m) {
  for (const auto* p : {&s.i1, &s.i2, &s.j1, &s.j2}) validate(*p);
  if (s.i1.inputArity != s.j1.inputArity || s.i2.inputArity != s.j1.outputArity() ||
      s.j2.inputArity != s.i1.outputArity() || s.i2.outputArity() != s.j2.outputArity())
    throw DimensionError("linearizeSquareAt: arities do not form a square");
  if (compose(s.i2, s.j1) != compose(s.j2, s.i1))
    throw CompatibilityError("linearizeSquareAt: square does not commute as polynomials");
  const auto m2 = evaluate(s.i1, m), n1 = evaluate(s.j1, m);
  ImmersionSquare sq{s.i1.inputArity, s.i1.outputArity(), s.j1.outputArity(), s.i2.outputArity(),
                     jacobian(s.i1, m),  jacobian(s.i2, n1),  jacobian(s.j1, m), jacobian(s.j2, m2)};
  const char* names[] = {"i1", "i2", "j1", "j2"};
  const Matrix* maps[] = {&sq.i1, &sq.i2, &sq.j1, &sq.j2};
  for (int k = 0; k < 4; ++k)
    if (!isInjective(*maps[k]))
      throw ImmersionError(std::string("linearizeSquareAt: ") + names[k] + " is not an immersion at the point");
  validate(sq);
  return sq;
}

inline Polynomial randomPolynomial(Rng& rng, size_t arity, unsigned maxDegree, size_t terms = 3) {
  Polynomial p(arity);
  for (size_t t = 0; t < terms; ++t) {
    Polynomial::Exponents e(arity, 0);
    unsigned budget = static_cast<unsigned>(rng.index(maxDegree + 1));
    for (unsigned b = 0; b < budget && arity > 0; ++b) ++e[rng.index(arity)];
    p.add(e, rng.integer(-3, 3));
  }
  return p;
}

inline PolyMap randomPolyMap(Rng& rng, size_t in, size_t out, unsigned maxDegree) {
  PolyMap p{in, {}};
  for (size_t k = 0; k < out; ++k) p.components.push_back(randomPolynomial(rng, in, maxDegree));
  return p;
}

}  // namespace dvbsym
