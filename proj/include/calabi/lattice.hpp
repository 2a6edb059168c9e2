#pragma once

// Exact arithmetic on H^2 of CP^2 blown up at b points.
//
// The lattice has basis H, E_1, ..., E_b with intersection pairing
// <H,H> = 1, <E_i,E_j> = -delta_ij, <H,E_i> = 0.  Classes are stored in the
// MINUS convention
//
//     class = h*H - sum_i e_i * E_i,
//
// so the symmetric family reads 3H - x(E_1+E_2+E_3) with e = (x,x,x).  Note
// that generic cohomology software stores +sum coefficients; the sign flip
// lives entirely in this type and in the pairing below,
//
//     <a, b> = h_a h_b - sum_i e_{a,i} e_{b,i}.
//
// Everything here is exact; no floating point, no tolerances.

#include <string>

#include "calabi/errors.hpp"
#include "calabi/rational.hpp"
#include "json.hpp"

namespace calabi {

/// CP^2 # b CP^2-bar: Euler characteristic, signature and c_1^2 are all
/// functions of the blow-up count alone.
class SurfaceModel {
 public:
  explicit SurfaceModel(int blowups) : b_(blowups) {
    if (blowups < 0) throw std::invalid_argument("negative blow-up count");
  }

  int blowups() const { return b_; }
  int euler_char() const { return 3 + b_; }   // chi = 3 + b
  int signature() const { return 1 - b_; }    // tau = 1 - b
  /// c_1^2 = 2*chi + 3*tau = 9 - b.
  Rational c1_squared() const { return Rational(9 - b_); }

  friend bool operator==(const SurfaceModel& a, const SurfaceModel& b) { return a.b_ == b.b_; }

 private:
  int b_;
};

class CohomologyClass {
 public:
  CohomologyClass(Rational h, RationalVector e) : h_(std::move(h)), e_(std::move(e)) {}

  static CohomologyClass hyperplane(const SurfaceModel& m) {
    return CohomologyClass(Rational(1), RationalVector::Constant(m.blowups(), Rational(0)));
  }
  /// E_i as a class in the minus convention: e_i = -1.
  static CohomologyClass exceptional(const SurfaceModel& m, int i) {
    if (i < 0 || i >= m.blowups()) throw std::invalid_argument("exceptional index out of range");
    RationalVector e = RationalVector::Constant(m.blowups(), Rational(0));
    e[i] = Rational(-1);
    return CohomologyClass(Rational(0), std::move(e));
  }

  const Rational& h() const { return h_; }
  const RationalVector& e() const { return e_; }
  int blowups() const { return static_cast<int>(e_.size()); }
  SurfaceModel model() const { return SurfaceModel(blowups()); }

  /// True when all exceptional coefficients coincide (the Z3-fixed classes).
  bool symmetric() const {
    for (Eigen::Index i = 1; i < e_.size(); ++i)
      if (e_[i] != e_[0]) return false;
    return true;
  }

  std::string str() const;

  friend bool operator==(const CohomologyClass& a, const CohomologyClass& b) {
    return a.h_ == b.h_ && a.e_.size() == b.e_.size() && a.e_ == b.e_;
  }

  friend CohomologyClass operator+(const CohomologyClass& a, const CohomologyClass& b) {
    if (a.blowups() != b.blowups()) throw DimensionError("adding classes of different blow-up counts");
    return CohomologyClass(a.h_ + b.h_, a.e_ + b.e_);
  }
  friend CohomologyClass operator-(const CohomologyClass& a, const CohomologyClass& b) {
    if (a.blowups() != b.blowups()) throw DimensionError("subtracting classes of different blow-up counts");
    return CohomologyClass(a.h_ - b.h_, a.e_ - b.e_);
  }
  friend CohomologyClass operator*(const Rational& s, const CohomologyClass& a) {
    return CohomologyClass(s * a.h_, (a.e_ * s).eval());
  }

 private:
  Rational h_;
  RationalVector e_;
};

/// Intersection pairing; exact and symmetric.
Rational pairing(const CohomologyClass& a, const CohomologyClass& b);

/// c_1 = 3H - (E_1 + ... + E_b); <c_1,c_1> = 9 - b.
CohomologyClass first_chern(const SurfaceModel& m);

/// The one-parameter Z3-symmetric family 3H - x(E_1+E_2+E_3) on b = 3.
CohomologyClass symmetric_kahler_class(const Rational& x);

/// Kahler-cone membership on the three-point blow-up: <w,w> > 0 together
/// with positivity against the (-1)-curves E_i and H - E_i - E_j.  Other
/// blow-up counts are rejected rather than approximated.
bool kahler_cone_contains(const SurfaceModel& m, const CohomologyClass& w);

// JSON form: {"h": "p/q", "e": ["p/q", ...]} with exact fraction strings.
// Round-trips are bit-exact.
void to_json(nlohmann::json& j, const CohomologyClass& w);
CohomologyClass cohomology_class_from_json(const nlohmann::json& j);

}  // namespace calabi
