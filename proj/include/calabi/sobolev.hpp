#pragma once

// Yamabe-based a-priori Sobolev bound.
//
// Tian's trick, run at the level of exact class data: for a Kahler metric g
// with Calabi energy E = int R^2 dg,
//
//   Y_[g]^2 >= 96 pi^2 c1^2 - 2E,
//
// and the deviation norm satisfies |R - Rbar|_{L2}^2 = E - Rbar^2 V exactly.
// The strict inequality
//
//   Y^2 lower bound  >  |R - Rbar|_{L2}^2                        (validity)
//
// is decided on exact rationals; it is algebraically equivalent (at zero
// Futaki norm) to E < B(w).  When valid, the scale-invariant Sobolev
// constant obeys
//
//   C_s <= max(6, Rbar sqrt(V)) / (Y - |R - Rbar|_{L2}),
//
// where the max covers both coefficients of the defining inequality
// |u|_{L4}^2 <= C_s (|grad u|_{L2}^2 + V^{-1/2} |u|_{L2}^2); the plain
// Rbar sqrt(V) / (Y - |R-Rbar|) variant is reported alongside.  Because the
// Calabi energy is nonincreasing along the flow, the bound evaluated at the
// initial energy persists for all later times; the report carries that as a
// documented guarantee, not a computation.

#include <optional>

#include "calabi/energy.hpp"

namespace calabi {

/// 96 pi^2 c1^2 - 2E, exact; may be negative (caller interprets).
EnergyQuantity yamabe_sq_lower_bound(const SurfaceModel& m, const EnergyQuantity& energy);

struct SobolevBoundReport {
  EnergyQuantity yamabe_sq_lower;  ///< exact, units pi^2
  EnergyQuantity deviation_sq;     ///< E - Rbar^2 V, exact, units pi^2
  double deviation_norm = 0.0;     ///< sqrt of the above, in units of pi
  bool bound_valid = false;        ///< strict exact comparison Y^2 > dev^2
  /// Present iff bound_valid.
  std::optional<double> sobolev_upper;                ///< max(6, Rbar sqrt V) numerator
  std::optional<double> sobolev_upper_scalar_coeff;   ///< Rbar sqrt V numerator
  /// The bound persists along the flow (energy monotonicity); equal to
  /// bound_valid by construction.
  bool holds_along_flow = false;
};

/// Full bound chain at a given initial Calabi energy.  Throws
/// InconsistentEnergyError when energy < Rbar^2 V.
SobolevBoundReport sobolev_upper_bound(const CohomologyClass& w, const EnergyQuantity& energy,
                                       const EnergyQuantity& futaki_norm_sq = EnergyQuantity::zero());

// Floats are serialized at full round-trip precision (17 significant digits).
void to_json(nlohmann::json& j, const SobolevBoundReport& r);

}  // namespace calabi
