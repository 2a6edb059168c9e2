#include "calabi/sobolev.hpp"

#include <cmath>
#include <numbers>

namespace calabi {

EnergyQuantity yamabe_sq_lower_bound(const SurfaceModel& m, const EnergyQuantity& energy) {
  return EnergyQuantity(Rational(96) * m.c1_squared()) - Rational(2) * energy;
}

SobolevBoundReport sobolev_upper_bound(const CohomologyClass& w, const EnergyQuantity& energy,
                                       const EnergyQuantity& futaki_norm_sq) {
  const MeanScalarData mean = mean_scalar_data(w);
  const EnergyQuantity deviation_sq = energy - mean.rbar_sq_vol;
  if (deviation_sq.sign() < 0)
    throw InconsistentEnergyError("energy " + energy.str() + " below the unconstrained minimum " +
                                  mean.rbar_sq_vol.str());
  (void)futaki_norm_sq;  // enters A and B only; the deviation norm is E - Rbar^2 V regardless

  SobolevBoundReport r;
  r.yamabe_sq_lower = yamabe_sq_lower_bound(w.model(), energy);
  r.deviation_sq = deviation_sq;
  // Compare squares exactly before any square root so boundary cases cannot
  // flip under rounding.
  r.bound_valid = r.yamabe_sq_lower > r.deviation_sq;
  r.holds_along_flow = r.bound_valid;
  r.deviation_norm = std::sqrt(deviation_sq.pi2().to_double());  // units of pi
  if (r.bound_valid) {
    const double pi = std::numbers::pi;
    const double yamabe = std::sqrt(r.yamabe_sq_lower.value());
    const double deviation = r.deviation_norm * pi;
    const double rbar_sqrt_vol = std::sqrt(mean.rbar_sqrt_vol_sq.value());
    const double gap = yamabe - deviation;  // > 0 by the exact comparison
    r.sobolev_upper = std::max(6.0, rbar_sqrt_vol) / gap;
    r.sobolev_upper_scalar_coeff = rbar_sqrt_vol / gap;
  }
  return r;
}

void to_json(nlohmann::json& j, const SobolevBoundReport& r) {
  j = nlohmann::json{
      {"yamabe_sq_lower", r.yamabe_sq_lower.str()},
      {"yamabe_sq_lower_pi2", r.yamabe_sq_lower.pi2().to_double()},
      {"deviation_sq", r.deviation_sq.str()},
      {"deviation_norm_pi", r.deviation_norm},
      {"bound_valid", r.bound_valid},
      {"holds_along_flow", r.holds_along_flow},
  };
  if (r.sobolev_upper) {
    j["sobolev_upper"] = *r.sobolev_upper;
    j["sobolev_upper_scalar_coeff"] = *r.sobolev_upper_scalar_coeff;
  }
}

}  // namespace calabi
