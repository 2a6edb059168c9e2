#pragma once

// Calabi-energy functionals and the curvature budgets of the compact surface.
//
// For a Kahler class w on CP^2 # b CP^2-bar:
//
//   Rbar^2 V        = 32 pi^2 <c1,w>^2 / <w,w>
//   A(w, |F|^2)     = Rbar^2 V + |F|^2            (sharp lower bound for int R^2)
//   B(w, |F|^2)     = 32 pi^2 (c1^2 + <c1,w>^2 / (3<w,w>)) + |F|^2 / 3
//
// and, via Gauss-Bonnet, the signature formula and the Kahler identity
// int |W+|^2 = int R^2 / 24, any metric with Calabi energy E satisfies
//
//   int |Ric0|^2 = E/4 - 8 pi^2 c1^2,     int |W-|^2 = E/24 - 12 pi^2 tau.
//
// (b = 3 specializes to E/4 - 48 pi^2 and E/24 + 24 pi^2.)  The Futaki norm
// |F|^2 is an opaque nonnegative input, zero by default: the Z3-symmetric
// classes treated downstream have vanishing Futaki character and no general
// algorithm for the norm is provided here.

#include "calabi/energy_quantity.hpp"
#include "calabi/lattice.hpp"

namespace calabi {

struct MeanScalarData {
  /// Rbar^2 V, exact.
  EnergyQuantity rbar_sq_vol;
  /// (Rbar sqrt(V))^2; numerically equal to rbar_sq_vol, reported separately
  /// so callers needing Rbar*sqrt(V) itself take one square root downstream.
  EnergyQuantity rbar_sqrt_vol_sq;
};

/// Both mean-scalar-curvature invariants of the class.  Throws
/// DegenerateClassError when <w,w> <= 0.
MeanScalarData mean_scalar_data(const CohomologyClass& w);

/// A(w) = 32 pi^2 <c1,w>^2/<w,w> + |F|^2.  Requires |F|^2 >= 0.
EnergyQuantity calabi_lower_bound_A(const CohomologyClass& w,
                                    const EnergyQuantity& futaki_norm_sq = EnergyQuantity::zero());

/// B(w) = 32 pi^2 (c1^2 + <c1,w>^2/(3 <w,w>)) + |F|^2/3.
EnergyQuantity energy_threshold_B(const CohomologyClass& w,
                                  const EnergyQuantity& futaki_norm_sq = EnergyQuantity::zero());

/// c1^2 - (2/3) <c1,w>^2/<w,w> > 0, decided exactly.
bool tian_cone(const CohomologyClass& w);

/// 48 pi^2 c1^2 > A(w, |F|^2); reduces to tian_cone when |F| = 0.
bool generalized_tian_cone(const CohomologyClass& w,
                           const EnergyQuantity& futaki_norm_sq = EnergyQuantity::zero());

struct CompactBudgets {
  EnergyQuantity ric0;    ///< upper bound for int_M |Ric0|^2
  EnergyQuantity wminus;  ///< upper bound for int_M |W-|^2
};

/// Budgets at Calabi energy `energy` (> 0 required).  Works for any blow-up
/// count via c1^2(model) and tau(model); b = 3 reproduces the constants
/// 48 pi^2 and 24 pi^2.
CompactBudgets compact_budgets(const SurfaceModel& m, const EnergyQuantity& energy);

struct ClassAnalysis {
  CohomologyClass kahler_class;
  EnergyQuantity futaki_norm_sq;
  EnergyQuantity lower_bound_A;
  EnergyQuantity threshold_B;
  bool in_tian_cone = false;
  bool in_generalized_tian_cone = false;
};

ClassAnalysis analyze_class(const CohomologyClass& w,
                            const EnergyQuantity& futaki_norm_sq = EnergyQuantity::zero());

// All EnergyQuantity values render as fraction strings tagged with the unit,
// e.g. "2400/11 pi^2".
void to_json(nlohmann::json& j, const ClassAnalysis& a);

}  // namespace calabi
