#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "calabi/sobolev.hpp"

using namespace calabi;

namespace {

Rational rq(long n, long d = 1) { return Rational(n, d); }
EnergyQuantity eq(long n, long d = 1) { return EnergyQuantity(Rational(n, d)); }

CohomologyClass random_cone_class(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(1, 30);
  std::uniform_int_distribution<long> den(21, 60);
  while (true) {
    RationalVector e(3);
    for (int i = 0; i < 3; ++i) e[i] = Rational(num(rng), den(rng));
    CohomologyClass w(Rational(1), e);
    if (kahler_cone_contains(SurfaceModel(3), w)) return w;
  }
}

}  // namespace

TEST_CASE("Yamabe lower bound") {
  const SurfaceModel m(3);
  CHECK(yamabe_sq_lower_bound(m, eq(2400, 11)) == eq(1536, 11));
  CHECK(yamabe_sq_lower_bound(m, eq(288)) == eq(0));
  CHECK(yamabe_sq_lower_bound(m, eq(240)) == eq(96));
  CHECK(yamabe_sq_lower_bound(m, eq(400)).sign() < 0);  // may go negative
}

TEST_CASE("Sobolev bound at a comfortable energy") {
  const auto w = symmetric_kahler_class(rq(1, 2));
  const auto r = sobolev_upper_bound(w, eq(240));
  CHECK(r.yamabe_sq_lower == eq(96));
  CHECK(r.deviation_sq == eq(240, 11));
  CHECK(r.bound_valid);
  REQUIRE(r.sobolev_upper.has_value());
  const double pi = std::numbers::pi;
  const double expected = std::max(6.0, 20.0 * pi * std::sqrt(6.0 / 11.0)) /
                          (std::sqrt(96.0) * pi - std::sqrt(240.0 / 11.0) * pi);
  CHECK(*r.sobolev_upper == doctest::Approx(expected).epsilon(1e-14));
  CHECK(*r.sobolev_upper_scalar_coeff <= *r.sobolev_upper);
}

TEST_CASE("limit cases: minimal energy and the threshold") {
  const auto w = symmetric_kahler_class(rq(1, 2));

  // E = Rbar^2 V: zero deviation; the quotient collapses to
  // max(6, Rbar sqrt V)/sqrt(Y^2) = 20 sqrt(6)/sqrt(1536) = 5/4 exactly.
  const auto at_min = sobolev_upper_bound(w, eq(2400, 11));
  CHECK(at_min.deviation_norm == 0.0);
  CHECK(at_min.bound_valid);
  CHECK(*at_min.sobolev_upper == doctest::Approx(1.25).epsilon(1e-13));

  // E = B exactly: Y^2 lower bound equals the deviation norm squared;
  // the strict inequality fails on the boundary.
  const auto at_b = sobolev_upper_bound(w, eq(2912, 11));
  CHECK(at_b.yamabe_sq_lower == at_b.deviation_sq);
  CHECK_FALSE(at_b.bound_valid);
  CHECK_FALSE(at_b.sobolev_upper.has_value());

  CHECK_THROWS_AS(sobolev_upper_bound(w, eq(100)), InconsistentEnergyError);
}

TEST_CASE("validity is exactly E < B, pointwise") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 120; ++i) {
    const auto w = random_cone_class(rng);
    const auto rv = mean_scalar_data(w).rbar_sq_vol;
    const auto b = energy_threshold_B(w);
    // Random exact energy above the floor Rbar^2 V.  Inside the Tian cone
    // B > Rbar^2 V and the samples straddle B; outside, every admissible
    // energy exceeds B and the bound must always be invalid.
    const Rational t(static_cast<long>(rng() % 300), 100);  // in [0, 3)
    const EnergyQuantity spread{t * abs((b - rv).pi2())};
    const auto e = rv + spread;
    const auto rep = sobolev_upper_bound(w, e);
    CHECK(rep.bound_valid == (e < b));
    CHECK((rep.yamabe_sq_lower > rep.deviation_sq) == (e < b));
    if (!tian_cone(w)) CHECK_FALSE(rep.bound_valid);
  }
}

TEST_CASE("upper bound is nondecreasing in the energy on the valid range") {
  const auto w = symmetric_kahler_class(rq(2, 3));
  const auto rv = mean_scalar_data(w).rbar_sq_vol;
  const auto b = energy_threshold_B(w);
  double prev = 0.0;
  for (long i = 0; i <= 40; ++i) {
    const auto e = rv + EnergyQuantity(Rational(i, 41) * (b - rv).pi2());
    const auto rep = sobolev_upper_bound(w, e);
    REQUIRE(rep.bound_valid);
    CHECK(*rep.sobolev_upper >= prev);
    prev = *rep.sobolev_upper;
  }
}

TEST_CASE("report serialization round-trips floats") {
  const auto rep = sobolev_upper_bound(symmetric_kahler_class(rq(1, 2)), eq(240));
  nlohmann::json j = rep;
  CHECK(j["yamabe_sq_lower"] == "96 pi^2");
  CHECK(j["bound_valid"] == true);
  CHECK(j["sobolev_upper"].get<double>() == *rep.sobolev_upper);
  CHECK(j["holds_along_flow"] == true);
}
