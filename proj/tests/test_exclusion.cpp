#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "calabi/exclusion.hpp"
#include "oracles.hpp"

using namespace calabi;

namespace {

Rational rq(long n, long d = 1) { return Rational(n, d); }
EnergyQuantity eq(long n, long d = 1) { return EnergyQuantity(Rational(n, d)); }

CohomologyClass half_class() { return symmetric_kahler_class(rq(1, 2)); }

EnergyQuantity just_below_b(const CohomologyClass& w) {
  return energy_threshold_B(w) - eq(1, 1000000);
}

std::set<std::vector<long>> param_set(const std::vector<BubbleCandidate>& v, long box) {
  std::set<std::vector<long>> out;
  for (const auto& c : v)
    if (*std::max_element(c.params().begin(), c.params().end()) <= box)
      out.insert({c.params().begin(), c.params().end()});
  return out;
}

// Independent re-derivation of the per-case surviving set over a parameter
// box: adjunction-route energies, determinant group orders, exhaustive
// sphere-class search.
std::set<std::vector<long>> oracle_surviving(int b2, const CohomologyClass& w,
                                             const EnergyQuantity& energy, int symmetry, long box,
                                             long mn_max) {
  const auto budgets = compact_budgets(SurfaceModel(3), energy);
  const auto table = oracles::sphere_class_table(w.e()[0], box, mn_max);
  std::set<std::vector<long>> out;
  for (const auto& c : oracles::box_candidates(b2, box)) {
    const EnergyQuantity r{oracles::ric0_pi2(c)};
    const EnergyQuantity wm{oracles::wminus_pi2(c)};
    if (!(r < budgets.ric0)) continue;
    bool survives = false;
    if (symmetry != 3) {
      survives = true;
    } else if (Rational(3) * r.pi2() < budgets.ric0.pi2() &&
               Rational(3) * wm.pi2() < budgets.wminus.pi2()) {
      survives = true;  // three copies fit: non-invariant formation possible
    } else {
      survives = true;
      for (long p : c.params())
        if (table.find(p) == table.end()) survives = false;
    }
    if (survives) out.insert({c.params().begin(), c.params().end()});
  }
  return out;
}

}  // namespace

TEST_CASE("trichotomy at the headline budgets forces invariance for every candidate") {
  const auto budgets = compact_budgets(SurfaceModel(3), eq(2912, 11));
  CHECK(budgets.wminus == eq(1156, 33));
  for (long k = 1; k <= 300; ++k) {
    const auto t = z3_trichotomy(BubbleCandidate::single(k), budgets);
    CHECK(t.must_be_invariant);
    CHECK(t.wminus_triggered);  // 12(k^2+2)/k >= 36 > 1156/33
  }
  const auto t21 = z3_trichotomy(BubbleCandidate::pair(2, 1), budgets);
  CHECK(t21.must_be_invariant);
  CHECK(t21.wminus_triggered);
}

TEST_CASE("trichotomy branch coverage on synthetic energies") {
  const auto budgets = compact_budgets(SurfaceModel(3), eq(2912, 11));
  // hypothetical wminus = 0: the traceless-Ricci inequality decides alone
  const auto forced = z3_trichotomy(eq(1000), EnergyQuantity::zero(), budgets);
  CHECK(forced.must_be_invariant);
  CHECK(forced.ric0_triggered);
  CHECK_FALSE(forced.wminus_triggered);
  const auto open = z3_trichotomy(EnergyQuantity::zero(), EnergyQuantity::zero(), budgets);
  CHECK_FALSE(open.must_be_invariant);
}

TEST_CASE("Lagrangian sphere classes for x = 1/2") {
  const auto w = half_class();
  const auto at11 = lagrangian_solutions(w, -11);
  REQUIRE(at11.size() == 1);
  CHECK(at11[0].m == 1);
  CHECK(at11[0].n == 2);
  CHECK(at11[0].self_intersection == -11);
  CHECK(at11[0].pairing_with_class == rq(0));

  for (long k = 1; k <= 10; ++k) CHECK(lagrangian_solutions(w, -k).empty());

  const auto at44 = lagrangian_solutions(w, -44);
  REQUIRE(at44.size() == 1);
  CHECK(at44[0].m == 2);
  CHECK(at44[0].n == 4);

  const auto d = min_lagrangian_self_intersection(w);
  REQUIRE(d.has_value());
  CHECK(*d == 11);
}

TEST_CASE("Lagrangian solver agrees with exhaustive search") {
  const auto w = half_class();
  const auto table = oracles::sphere_class_table(rq(1, 2), 500, 300);
  for (long k = 1; k <= 500; ++k) {
    const auto sols = lagrangian_solutions(w, -k);
    const auto it = table.find(k);
    if (it == table.end()) {
      CHECK(sols.empty());
    } else {
      REQUIRE(sols.size() == it->second.size());
      CHECK(sols[0].m == it->second[0].first);
      CHECK(sols[0].n == it->second[0].second);
    }
  }
}

TEST_CASE("Lagrangian solver input validation") {
  RationalVector e(3);
  e << rq(1, 2), rq(1, 2), rq(1, 3);
  CHECK_THROWS_AS(lagrangian_solutions(CohomologyClass(rq(3), e), -11), UnsupportedSymmetryError);
  CHECK_THROWS_AS(lagrangian_solutions(half_class(), 2), std::domain_error);
  CHECK_THROWS_AS(lagrangian_solutions(CohomologyClass(rq(0), RationalVector::Constant(3, rq(0))), -1),
                  DegenerateClassError);
}

TEST_CASE("headline exclusion run") {
  const ExclusionInput input{half_class(), just_below_b(half_class()), 3, EnergyQuantity::zero()};
  const auto rep = exclude(input);
  CHECK(rep.verdict == Verdict::kExcluded);

  const auto& case1 = rep.cases[0];
  CHECK(case1.case_excluded);
  CHECK(case1.listing_complete);
  REQUIRE(case1.outcomes.size() == 5);
  for (long k = 1; k <= 5; ++k) {
    const auto& o = case1.outcomes[k - 1];
    CHECK(o.candidate.params()[0] == k);
    CHECK_FALSE(o.survived);
    CHECK(*o.kill_reason == KillReason::kNoLagrangianSolution);
    CHECK(o.trichotomy->must_be_invariant);
  }
  CHECK(case1.all_listed_forced_invariant);
  CHECK(case1.noninvariant_flip_energy == eq(288));

  for (int b2 = 2; b2 <= 3; ++b2) {
    const auto& c = rep.cases[b2 - 1];
    CHECK(c.case_excluded);
    CHECK(c.surviving.empty());
    REQUIRE(c.min_lagrangian_self_int.has_value());
    CHECK(*c.min_lagrangian_self_int >= 11);
    REQUIRE(c.minimal_feasible.has_value());
    CHECK_FALSE(c.minimal_feasible->survived);
    CHECK(*c.minimal_feasible->kill_reason == KillReason::kEnergyBudget);
    for (const auto& o : c.outcomes) {
      CHECK_FALSE(o.survived);
      CHECK(*o.kill_reason == KillReason::kNoLagrangianSolution);
    }
  }
}

TEST_CASE("huge budgets leave survivors everywhere") {
  const ExclusionInput input{half_class(), eq(1000000), 3, EnergyQuantity::zero()};
  const auto rep = exclude(input);
  CHECK(rep.verdict == Verdict::kNotExcluded);
  for (const auto& c : rep.cases) {
    CHECK_FALSE(c.case_excluded);
    CHECK_FALSE(c.surviving.empty());
  }
}

TEST_CASE("without the discrete symmetry the argument does not close") {
  const ExclusionInput input{half_class(), eq(2589, 10), 1, EnergyQuantity::zero()};
  const auto rep = exclude(input);
  CHECK(rep.verdict == Verdict::kNotExcluded);
  for (const auto& o : rep.cases[0].outcomes) {
    CHECK(o.survived);
    CHECK(*o.survival_reason == SurvivalReason::kTripleCopyUnavailable);
    CHECK_FALSE(o.trichotomy.has_value());
  }
}

TEST_CASE("exclusion input validation") {
  CHECK_THROWS_AS(exclude(ExclusionInput{half_class(), eq(100), 3, EnergyQuantity::zero()}),
                  std::domain_error);  // below the lower bound A
  CHECK_THROWS_AS(exclude(ExclusionInput{half_class(), eq(300), 2, EnergyQuantity::zero()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      exclude(ExclusionInput{symmetric_kahler_class(rq(2)), eq(300), 3, EnergyQuantity::zero()}),
      DegenerateClassError);  // outside the Kahler cone
}

TEST_CASE("reports are deterministic") {
  const ExclusionInput input{half_class(), eq(500), 3, EnergyQuantity::zero()};
  nlohmann::json a = exclude(input);
  nlohmann::json b = exclude(input);
  CHECK(a.dump() == b.dump());
}

TEST_CASE("verdict and surviving sets are monotone in the energy") {
  const auto w = half_class();
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> pick(2400 / 11 + 1, 2000);
  for (int trial = 0; trial < 6; ++trial) {
    long a = pick(rng), b = pick(rng);
    if (a > b) std::swap(a, b);
    const auto ra = exclude(ExclusionInput{w, eq(a), 3, EnergyQuantity::zero()});
    const auto rb = exclude(ExclusionInput{w, eq(b), 3, EnergyQuantity::zero()});
    if (rb.verdict == Verdict::kExcluded) CHECK(ra.verdict == Verdict::kExcluded);
    for (int i = 0; i < 3; ++i) {
      const auto sa = param_set(ra.cases[i].surviving, 60);
      const auto sb = param_set(rb.cases[i].surviving, 60);
      CHECK(std::includes(sb.begin(), sb.end(), sa.begin(), sa.end()));
    }
  }
}

TEST_CASE("surviving sets match the brute-force oracle on a box") {
  const auto w = half_class();
  for (const long e : {264L, 500L, 1200L}) {
    for (const int symmetry : {3, 1}) {
      ExclusionOptions opts;
      opts.listing_box = 25;
      opts.max_listed = 100000;
      const auto rep = exclude(ExclusionInput{w, eq(e), symmetry, EnergyQuantity::zero()}, opts);
      for (int b2 = 1; b2 <= 3; ++b2) {
        const auto engine = param_set(rep.cases[b2 - 1].surviving, 25);
        const auto oracle = oracle_surviving(b2, w, eq(e), symmetry, 25, 300);
        CHECK(engine == oracle);
      }
    }
  }
}

TEST_CASE("flip threshold for the half class sits at 288 pi^2") {
  const auto ft = find_flip_threshold(half_class(), 3, EnergyQuantity::zero(), rq(1, 1024));
  CHECK(ft.last_excluded <= eq(288));
  CHECK(ft.first_not_excluded > eq(288));
  CHECK((ft.first_not_excluded - ft.last_excluded).pi2() <= rq(1, 1024));

  // the verdict is sharp at the bracket ends
  CHECK(exclusion_verdict(ExclusionInput{half_class(), ft.last_excluded, 3,
                                         EnergyQuantity::zero()}) == Verdict::kExcluded);
  CHECK(exclusion_verdict(ExclusionInput{half_class(), ft.first_not_excluded, 3,
                                         EnergyQuantity::zero()}) == Verdict::kNotExcluded);
}

TEST_CASE("generator policy: any vs all") {
  // At x = 1 the Lagrangian line realizes -self-intersections 2 t^2, so the
  // mixed candidate (2,1) has k = 2 realizable and l = 1 not.
  const auto w = symmetric_kahler_class(rq(1));
  const auto d = min_lagrangian_self_intersection(w);
  REQUIRE(d.has_value());
  CHECK(*d == 2);

  const EnergyQuantity e = eq(400);
  ExclusionOptions all_opts;
  ExclusionOptions any_opts;
  any_opts.generator_policy = GeneratorPolicy::kAny;
  const auto rep_all = exclude(ExclusionInput{w, e, 3, EnergyQuantity::zero()}, all_opts);
  const auto rep_any = exclude(ExclusionInput{w, e, 3, EnergyQuantity::zero()}, any_opts);

  auto find21 = [](const ExclusionReport& r) -> const CandidateOutcome* {
    for (const auto& o : r.cases[1].outcomes)
      if (o.candidate == BubbleCandidate::pair(2, 1)) return &o;
    return nullptr;
  };
  const auto* o_all = find21(rep_all);
  const auto* o_any = find21(rep_any);
  REQUIRE(o_all != nullptr);
  REQUIRE(o_any != nullptr);
  REQUIRE(o_all->trichotomy.has_value());
  CHECK(o_all->trichotomy->must_be_invariant);
  CHECK_FALSE(o_all->survived);
  CHECK(*o_all->kill_reason == KillReason::kSelfIntersectionMismatch);
  CHECK(o_any->survived);
  CHECK(*o_any->survival_reason == SurvivalReason::kLagrangianRealizable);
}

TEST_CASE("report JSON carries the exact and rounded thresholds") {
  const ExclusionInput input{half_class(), just_below_b(half_class()), 3, EnergyQuantity::zero()};
  nlohmann::json j = exclude(input);
  CHECK(j["schema"] == 1);
  CHECK(j["verdict"] == "EXCLUDED");
  CHECK(j["rounded_reference"]["ric0_over_8pi2"] == "21/10");
  CHECK(j["cases"][0]["candidates"].size() == 5);
  CHECK(j["cases"][1]["minimal_feasible"]["kill_reason"] == "ENERGY_BUDGET");
  const std::string text = render_text(exclude(input));
  CHECK(text.find("EXCLUDED") != std::string::npos);
  CHECK(text.find("NO_LAGRANGIAN_SOLUTION") != std::string::npos);
}
