#pragma once

// Toric scalar-flat ALE bubble candidates with b2 in {1,2,3}.
//
// H_2 of such a bubble is generated by holomorphic CP^1s whose intersection
// form is tridiagonal with diagonal (-k), (-k,1;1,-l) or (-i,-j,-k) and
// off-diagonal 1, negative definite.  Group order at infinity:
//
//   b2 = 1:  |Gamma| = k            (k >= 1)
//   b2 = 2:  |Gamma| = kl - 1       (k >= 2, l >= 1, k >= l)
//   b2 = 3:  |Gamma| = ijk - i - k  (i,j,k >= 1; zero/negative is flagged
//                                    degenerate, not silently dropped)
//
// First Chern class in the generator basis:
//
//   b2 = 1:  c1 = ((k-2)/k) E
//   b2 = 2:  c1 = (1 - (l+1)/|G|) E1 + (1 - (k+1)/|G|) E2
//   b2 = 3:  c1 = (1 - jk/|G|) E1 + (1 - (k+i)/|G|) E2 + (1 - ij/|G|) E3
//
// and int |Ric0|^2 = -8 pi^2 <c1,c1> (closed forms below expand exactly
// this quadratic form).  For a scalar-flat ALE Kahler end the Gauss-Bonnet
// formula gives
//
//   int |W-|^2 = 8 pi^2 (chi(M_inf) - 1/|Gamma|) + (1/2) int |Ric0|^2,
//
// with chi(M_inf) = 1 + b2, and the signature formula carries the eta
// invariant:  tau + eta = -int |W-|^2 / (12 pi^2)  (informational only).

#include <array>
#include <span>
#include <vector>

#include "calabi/energy_quantity.hpp"
#include "calabi/errors.hpp"
#include "calabi/rational.hpp"
#include "json.hpp"

namespace calabi {

class BubbleCandidate {
 public:
  static BubbleCandidate single(long k);
  static BubbleCandidate pair(long k, long l);
  /// Triples are canonicalized up to reversal (i,j,k) ~ (k,j,i); the
  /// intersection form is symmetric under it.
  static BubbleCandidate triple(long i, long j, long k);

  int b2() const { return b2_; }
  std::span<const long> params() const { return {p_.data(), static_cast<std::size_t>(b2_)}; }
  long group_order() const;
  int euler_char() const { return 1 + b2_; }
  /// Group order <= 0: the plumbing data does not describe an ALE end.
  bool degenerate() const { return group_order() <= 0; }

  friend bool operator==(const BubbleCandidate& a, const BubbleCandidate& b) {
    return a.b2_ == b.b2_ && a.p_ == b.p_;
  }
  friend bool operator<(const BubbleCandidate& a, const BubbleCandidate& b) {
    if (a.b2_ != b.b2_) return a.b2_ < b.b2_;
    return a.p_ < b.p_;
  }

 private:
  BubbleCandidate(int b2, std::array<long, 3> p) : b2_(b2), p_(p) {}
  int b2_;
  std::array<long, 3> p_;
};

/// Tridiagonal intersection form: diagonal -params, off-diagonal 1.
RationalMatrix intersection_matrix(const BubbleCandidate& c);

/// Negative definiteness via leading principal minors.
bool negative_definite(const BubbleCandidate& c);

/// c1 coefficients in the generator basis (closed forms above).
RationalVector c1_coefficients(const BubbleCandidate& c);

/// int |Ric0|^2 from the per-b2 closed forms.  Throws
/// DegenerateCandidateError when |Gamma| <= 0.
EnergyQuantity ric0_energy(const BubbleCandidate& c);

/// Same quantity as -8 pi^2 c1^T Q c1; independent route kept for
/// cross-checking the closed forms.
EnergyQuantity ric0_energy_from_form(const BubbleCandidate& c);

/// int |W-|^2 via ALE Gauss-Bonnet.  For b2 = 1 this simplifies to
/// 4 pi^2 (k^2+2)/k.
EnergyQuantity wminus_energy(const BubbleCandidate& c);

/// tau(M_inf) + eta(S^3/Gamma) = -wminus/(12 pi^2); informational, never
/// used in exclusion decisions.
Rational signature_plus_eta(const BubbleCandidate& c);

/// All candidates of the given b2 with ric0_energy < ric0_budget (strict),
/// in lexicographic parameter order.  Finiteness comes from documented
/// growth bounds: with f = ric0/(8 pi^2) and B = budget/(8 pi^2),
///   b2=1:  f = k - 4 + 4/k >= k - 4,            so k <= B + 4;
///   b2=2:  f >= (k-1)/4 for k >= 5,             so k <= max(4, 4B + 1);
///   b2=3:  f >= (P-2)/4 - 32 for P = max param >= 8,
///                                               so P <= max(7, 4B + 130).
/// The finite exceptional sets below those floors are scanned explicitly.
std::vector<BubbleCandidate> enumerate_candidates(int b2, const EnergyQuantity& ric0_budget);

struct BoundedEnumeration {
  std::vector<BubbleCandidate> items;
  bool complete = true;  ///< false when param_cap cut the derived bound short
  long bound_used = 0;
};

/// enumerate_candidates restricted to parameters <= param_cap; `complete`
/// reports whether the cap was at least the derived bound.
BoundedEnumeration enumerate_candidates_bounded(int b2, const EnergyQuantity& ric0_budget,
                                                long param_cap);

/// The derived parameter bound used by enumerate_candidates for this budget.
long enumeration_param_bound(int b2, const EnergyQuantity& ric0_budget);

/// Least int |W-|^2 over all candidates of a given b2: 12 pi^2, 64/3 pi^2,
/// 30 pi^2, attained by the Ricci-flat candidates below (c1 = 0).
EnergyQuantity min_wminus_energy(int b2);

/// (2), (2,2), (2,2,2): the unique candidates of each b2 with vanishing c1,
/// hence zero |Ric0|^2 energy.
BubbleCandidate ricci_flat_candidate(int b2);

/// Catalog entry with params, |Gamma|, energies as fraction-of-pi^2 strings.
void to_json(nlohmann::json& j, const BubbleCandidate& c);

}  // namespace calabi
