#include "calabi/energy.hpp"

namespace calabi {

namespace {

/// <c1,w>^2 / <w,w>, the degree-0 ratio behind every functional here.
Rational chern_ratio(const CohomologyClass& w) {
  const Rational ww = pairing(w, w);
  if (ww.sign() <= 0)
    throw DegenerateClassError("class with <w,w> = " + ww.str() + " <= 0");
  const Rational cw = pairing(first_chern(w.model()), w);
  return cw * cw / ww;
}

void check_futaki(const EnergyQuantity& f) {
  if (f.sign() < 0) throw std::domain_error("negative Futaki norm squared: " + f.str());
}

}  // namespace

MeanScalarData mean_scalar_data(const CohomologyClass& w) {
  const EnergyQuantity rv = EnergyQuantity(Rational(32) * chern_ratio(w));
  return MeanScalarData{rv, rv};
}

EnergyQuantity calabi_lower_bound_A(const CohomologyClass& w, const EnergyQuantity& futaki_norm_sq) {
  check_futaki(futaki_norm_sq);
  return mean_scalar_data(w).rbar_sq_vol + futaki_norm_sq;
}

EnergyQuantity energy_threshold_B(const CohomologyClass& w, const EnergyQuantity& futaki_norm_sq) {
  check_futaki(futaki_norm_sq);
  const Rational third(1, 3);
  return EnergyQuantity(Rational(32) * (w.model().c1_squared() + third * chern_ratio(w))) +
         third * futaki_norm_sq;
}

bool tian_cone(const CohomologyClass& w) {
  return w.model().c1_squared() - Rational(2, 3) * chern_ratio(w) > Rational(0);
}

bool generalized_tian_cone(const CohomologyClass& w, const EnergyQuantity& futaki_norm_sq) {
  return EnergyQuantity(Rational(48) * w.model().c1_squared()) >
         calabi_lower_bound_A(w, futaki_norm_sq);
}

CompactBudgets compact_budgets(const SurfaceModel& m, const EnergyQuantity& energy) {
  if (energy.sign() <= 0) throw std::domain_error("Calabi energy must be positive: " + energy.str());
  return CompactBudgets{
      Rational(1, 4) * energy - EnergyQuantity(Rational(8) * m.c1_squared()),
      Rational(1, 24) * energy - EnergyQuantity(Rational(12 * m.signature())),
  };
}

ClassAnalysis analyze_class(const CohomologyClass& w, const EnergyQuantity& futaki_norm_sq) {
  return ClassAnalysis{
      w,
      futaki_norm_sq,
      calabi_lower_bound_A(w, futaki_norm_sq),
      energy_threshold_B(w, futaki_norm_sq),
      tian_cone(w),
      generalized_tian_cone(w, futaki_norm_sq),
  };
}

void to_json(nlohmann::json& j, const ClassAnalysis& a) {
  j = nlohmann::json{
      {"class", a.kahler_class},
      {"futaki_norm_sq", a.futaki_norm_sq.str()},
      {"A", a.lower_bound_A.str()},
      {"B", a.threshold_B.str()},
      {"rbar_sq_vol", mean_scalar_data(a.kahler_class).rbar_sq_vol.str()},
      {"in_tian_cone", a.in_tian_cone},
      {"in_generalized_tian_cone", a.in_generalized_tian_cone},
  };
}

}  // namespace calabi
