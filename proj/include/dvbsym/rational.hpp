#pragma once

#include <gmpxx.h>

#include <cctype>
#include <concepts>
#include <cstdint>
#include <limits>
#include <memory>
#include <ostream>
#include <string>

#include "errors.hpp"

namespace dvbsym {

// Exact rational. Values whose reduced numerator and denominator fit in int64 are
// stored inline; anything larger lives in a GMP rational. The representation is
// canonical: a GMP value is never one that fits inline.
class Rational {
 public:
  Rational() = default;
  template <std::integral T>
  Rational(T v) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_unsigned_v<T> && sizeof(T) >= sizeof(int64_t)) {
      if (v > static_cast<T>(kMax)) {
        setBig(mpq_class(mpz_class(std::to_string(v))));
        return;
      }
    }
    n_ = static_cast<int64_t>(v);
  }
  Rational(int64_t num, int64_t den) { assign(static_cast<i128>(num), static_cast<i128>(den)); }
  explicit Rational(const mpq_class& q) { setBig(q); }

  Rational(const Rational& o) : n_(o.n_), d_(o.d_) {
    if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
  }
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& o) {
    if (this != &o) {
      n_ = o.n_;
      d_ = o.d_;
      big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Rational& operator=(Rational&&) noexcept = default;

  bool isSmall() const { return !big_; }
  mpq_class toMpq() const {
    if (big_) return *big_;
    mpq_class q(mpz_class(std::to_string(n_)), mpz_class(std::to_string(d_)));
    return q;
  }
  std::string get_str() const {
    if (big_) return big_->get_str();
    return d_ == 1 ? std::to_string(n_) : std::to_string(n_) + "/" + std::to_string(d_);
  }
  double toDouble() const { return big_ ? big_->get_d() : static_cast<double>(n_) / static_cast<double>(d_); }

  friend int sgn(const Rational& a) {
    if (a.big_) return sgn(*a.big_);
    return (a.n_ > 0) - (a.n_ < 0);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.isSmall() && b.isSmall()) {
      if (a.d_ == 1 && b.d_ == 1) {
        int64_t s;
        if (!__builtin_add_overflow(a.n_, b.n_, &s) && s != kMin) return Rational(Raw{}, s, 1);
      }
      Rational r;
      r.assign(static_cast<i128>(a.n_) * b.d_ + static_cast<i128>(b.n_) * a.d_, static_cast<i128>(a.d_) * b.d_);
      return r;
    }
    return Rational(a.toMpq() + b.toMpq());
  }
  friend Rational operator-(const Rational& a) {
    if (a.isSmall()) return Rational(Raw{}, -a.n_, a.d_);
    return Rational(mpq_class(-*a.big_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.isSmall() && b.isSmall()) {
      if (a.n_ == 0 || b.n_ == 0) return Rational();
      if (a.d_ == 1 && b.d_ == 1) {
        int64_t p;
        if (!__builtin_mul_overflow(a.n_, b.n_, &p) && p != kMin) return Rational(Raw{}, p, 1);
      }
      Rational r;
      r.assign(static_cast<i128>(a.n_) * b.n_, static_cast<i128>(a.d_) * b.d_);
      return r;
    }
    return Rational(a.toMpq() * b.toMpq());
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (sgn(b) == 0) throw std::domain_error("rational division by zero");
    if (a.isSmall() && b.isSmall()) {
      Rational r;
      r.assign(static_cast<i128>(a.n_) * b.d_, static_cast<i128>(a.d_) * b.n_);
      return r;
    }
    return Rational(a.toMpq() / b.toMpq());
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (a.isSmall() != b.isSmall()) return false;
    if (a.isSmall()) return a.n_ == b.n_ && a.d_ == b.d_;
    return *a.big_ == *b.big_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    if (a.isSmall() && b.isSmall()) return static_cast<i128>(a.n_) * b.d_ < static_cast<i128>(b.n_) * a.d_;
    return a.toMpq() < b.toMpq();
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  friend Rational abs(const Rational& a) { return sgn(a) < 0 ? -a : a; }
  friend std::ostream& operator<<(std::ostream& os, const Rational& a) { return os << a.get_str(); }

 private:
  using i128 = __int128;
  static constexpr int64_t kMax = std::numeric_limits<int64_t>::max();
  static constexpr int64_t kMin = std::numeric_limits<int64_t>::min();
  struct Raw {};
  Rational(Raw, int64_t n, int64_t d) : n_(n), d_(d) {}

  static unsigned __int128 gcd(unsigned __int128 a, unsigned __int128 b) {
    while (b) {
      auto t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  static std::string str128(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u) {
      s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
      u /= 10;
    }
    return neg ? "-" + s : s;
  }

  // n/d with products of two int64 values, so neither is the most negative i128
  void assign(i128 n, i128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (n == 0) {
      n_ = 0;
      d_ = 1;
      big_.reset();
      return;
    }
    unsigned __int128 un = n < 0 ? -static_cast<unsigned __int128>(n) : static_cast<unsigned __int128>(n);
    unsigned __int128 g = gcd(un, static_cast<unsigned __int128>(d));
    if (g > 1) {
      n /= static_cast<i128>(g);
      d /= static_cast<i128>(g);
    }
    if (n > kMax || n <= kMin || d > kMax) {
      mpq_class q(mpz_class(str128(n)), mpz_class(str128(d)));
      big_ = std::make_unique<mpq_class>(q);
      n_ = 0;
      d_ = 1;
      return;
    }
    n_ = static_cast<int64_t>(n);
    d_ = static_cast<int64_t>(d);
    big_.reset();
  }

  void setBig(mpq_class q) {
    q.canonicalize();
    const mpz_class& num = q.get_num();
    const mpz_class& den = q.get_den();
    if (num.fits_slong_p() && den.fits_slong_p() && num.get_si() != kMin) {
      n_ = num.get_si();
      d_ = den.get_si();
      big_.reset();
      return;
    }
    n_ = 0;
    d_ = 1;
    big_ = std::make_unique<mpq_class>(std::move(q));
  }

  int64_t n_ = 0, d_ = 1;
  std::unique_ptr<mpq_class> big_;
};

inline Rational parseRational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ParseError("empty rational");
  auto slash = s.find('/');
  auto digits = [](const std::string& t, bool allowSign) {
    size_t i = 0;
    if (allowSign && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!digits(s, true)) throw ParseError("malformed rational '" + text + "'");
    return Rational(mpq_class(mpz_class(s[0] == '+' ? s.substr(1) : s)));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!digits(num, true) || !digits(den, false))
    throw ParseError("malformed rational '" + text + "'");
  mpz_class d(den);
  if (d == 0) throw ParseError("zero denominator in '" + text + "'");
  return Rational(mpq_class(mpz_class(num[0] == '+' ? num.substr(1) : num), d));
}

inline std::string formatRational(const Rational& r) { return r.get_str(); }

inline bool isZero(const Rational& r) { return sgn(r) == 0; }

}  // namespace dvbsym
