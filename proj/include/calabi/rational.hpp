#pragma once

// Exact rational scalar used throughout the arithmetic core.
//
// Thin value wrapper around GMP's mpq_class.  The wrapper evaluates every
// operation eagerly so that gmpxx expression templates never leak into
// Eigen expressions, and it pins the serialization format: decimal-free
// fraction strings "p/q" (or "p" when the denominator is 1).

#include <gmpxx.h>

#include <Eigen/Core>
#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace calabi {

using Integer = mpz_class;

class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(static_cast<signed long>(n)) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : v_(n) {}                             // NOLINT(google-explicit-constructor)
  Rational(long num, long den) : v_(num, den) { normalize(); }
  explicit Rational(const Integer& n) : v_(n) {}
  Rational(const Integer& num, const Integer& den) : v_(num, den) { normalize(); }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  /// Parses "p", "+p", "-p" or "p/q" with arbitrary-precision integers.
  /// Decimal notation is rejected; rationals stay exact end to end.
  static Rational parse(std::string_view text);

  const Integer& numerator() const { return v_.get_num(); }
  const Integer& denominator() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }
  double to_double() const { return v_.get_d(); }

  /// Canonical fraction string, e.g. "-3/4" or "6".
  std::string str() const { return v_.get_str(); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) < 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  friend Rational abs(const Rational& a) { return Rational(mpq_class(::abs(a.v_))); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& a) { return os << a.str(); }

 private:
  void normalize() {
    if (v_.get_den() == 0) throw std::domain_error("rational with zero denominator");
    v_.canonicalize();
  }

  mpq_class v_;
};

inline Rational Rational::parse(std::string_view text) {
  auto bad = [&] { throw std::invalid_argument("not a fraction string: '" + std::string(text) + "'"); };
  if (text.empty()) bad();
  const auto slash = text.find('/');
  auto check_int = [&](std::string_view part) {
    if (part.empty()) bad();
    std::size_t i = (part[0] == '+' || part[0] == '-') ? 1 : 0;
    if (i == part.size()) bad();
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') bad();
  };
  if (slash == std::string_view::npos) {
    check_int(text);
    return Rational(Integer(std::string(text)));
  }
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  check_int(num);
  check_int(den);
  Integer d{std::string(den)};
  if (d == 0) throw std::invalid_argument("fraction with zero denominator: '" + std::string(text) + "'");
  return Rational(Integer(std::string(num)), d);
}

using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace calabi

namespace Eigen {

template <>
struct NumTraits<calabi::Rational> : GenericNumTraits<calabi::Rational> {
  typedef calabi::Rational Real;
  typedef calabi::Rational NonInteger;
  typedef calabi::Rational Nested;

  static inline Real epsilon() { return calabi::Rational(0); }
  static inline Real dummy_precision() { return calabi::Rational(0); }
  static inline int digits10() { return 0; }

  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 60,
    MulCost = 60,
  };
};

}  // namespace Eigen
