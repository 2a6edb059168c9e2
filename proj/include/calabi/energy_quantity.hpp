#pragma once

// Curvature energies on these surfaces are exact rational multiples of pi^2
// (Gauss-Bonnet, signature and intersection numbers only ever produce such
// values).  EnergyQuantity keeps the rational coefficient exact; floating
// point enters only when a caller explicitly asks for the numeric value or
// a square root.

#include <numbers>
#include <string>

#include "calabi/rational.hpp"

namespace calabi {

inline double pi_squared() { return std::numbers::pi * std::numbers::pi; }

class EnergyQuantity {
 public:
  EnergyQuantity() = default;
  explicit EnergyQuantity(Rational pi2_coeff) : pi2_(std::move(pi2_coeff)) {}

  static EnergyQuantity zero() { return EnergyQuantity(); }
  static EnergyQuantity from_pi2(Rational c) { return EnergyQuantity(std::move(c)); }

  /// Exact coefficient q in value = q * pi^2.
  const Rational& pi2() const { return pi2_; }
  double value() const { return pi2_.to_double() * pi_squared(); }
  int sign() const { return pi2_.sign(); }

  /// "2400/11 pi^2" -- the unit tag is part of the canonical rendering.
  std::string str() const { return pi2_.str() + " pi^2"; }

  EnergyQuantity& operator+=(const EnergyQuantity& o) { pi2_ += o.pi2_; return *this; }
  EnergyQuantity& operator-=(const EnergyQuantity& o) { pi2_ -= o.pi2_; return *this; }
  EnergyQuantity& operator*=(const Rational& s) { pi2_ *= s; return *this; }

  friend EnergyQuantity operator+(EnergyQuantity a, const EnergyQuantity& b) { return a += b; }
  friend EnergyQuantity operator-(EnergyQuantity a, const EnergyQuantity& b) { return a -= b; }
  friend EnergyQuantity operator*(const Rational& s, EnergyQuantity a) { return a *= s; }
  friend EnergyQuantity operator*(EnergyQuantity a, const Rational& s) { return a *= s; }
  friend EnergyQuantity operator-(const EnergyQuantity& a) { return EnergyQuantity(-a.pi2_); }

  /// Ratio of two energies is a plain rational (the pi^2 factors cancel).
  friend Rational operator/(const EnergyQuantity& a, const EnergyQuantity& b) { return a.pi2_ / b.pi2_; }

  friend bool operator==(const EnergyQuantity& a, const EnergyQuantity& b) { return a.pi2_ == b.pi2_; }
  friend bool operator!=(const EnergyQuantity& a, const EnergyQuantity& b) { return a.pi2_ != b.pi2_; }
  friend bool operator<(const EnergyQuantity& a, const EnergyQuantity& b) { return a.pi2_ < b.pi2_; }
  friend bool operator>(const EnergyQuantity& a, const EnergyQuantity& b) { return a.pi2_ > b.pi2_; }
  friend bool operator<=(const EnergyQuantity& a, const EnergyQuantity& b) { return a.pi2_ <= b.pi2_; }
  friend bool operator>=(const EnergyQuantity& a, const EnergyQuantity& b) { return a.pi2_ >= b.pi2_; }

 private:
  Rational pi2_;
};

}  // namespace calabi
