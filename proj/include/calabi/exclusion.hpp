#pragma once

// Case-by-case bubble exclusion on CP^2 # 3 CP^2-bar.
//
// Given a Kahler class w, an initial Calabi energy E0 and the symmetry of
// the initial metric, decide whether every scalar-flat ALE bubble candidate
// is ruled out.  The weapons, per b2 in {1,2,3}:
//
//  * Energy budget.  L2 curvature norms are scale invariant, so a bubble
//    needs int |Ric0|^2 < ric0_budget(E0) (strict) on the compact side.
//
//  * Z3 trichotomy (only when the initial metric is Z3-invariant).  A bubble
//    that is NOT invariant under the induced Z3 action comes in three
//    isometric copies, so both
//        3 int |W-|^2  < wminus_budget   and   3 int |Ric0|^2 < ric0_budget
//    must hold strictly; if either fails the bubble must be Z3-invariant.
//
//  * Lagrangian diophantine constraint.  A Z3-invariant bubble pushes its
//    generator spheres into classes mH - n(E1+E2+E3) with <w, S> -> 0 along
//    the blow-up sequence; for rational classes the pairing lives in a
//    discrete lattice, so the limit forces exact vanishing:
//        <w, mH - n Sum E_i> = 0   and   m^2 - 3n^2 = -k
//    for every diagonal entry -k of the intersection form.  No solution
//    kills the candidate.
//
// Every inequality in the verdict path is decided on exact rationals; the
// rounded decimal thresholds in circulation (e.g. 2.1 for the budget over
// 8 pi^2, 258.9 pi^2 for the b2=1 non-invariant branch) are carried in the
// report for cross-reference only, never used in decisions.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "calabi/bubbles.hpp"
#include "calabi/energy.hpp"
#include "calabi/sobolev.hpp"

namespace calabi {

struct ExclusionInput {
  CohomologyClass kahler_class;  // b = 3
  EnergyQuantity initial_energy;
  int symmetry_order = 3;  // 1 (no discrete symmetry) or 3 (Z3-invariant data)
  EnergyQuantity futaki_norm_sq = EnergyQuantity::zero();
};

/// Z3-invariant sphere class mH - n(E1+E2+E3), canonical up to overall sign.
struct SphereClassSolution {
  Integer m;
  Integer n;
  Integer self_intersection;    // m^2 - 3n^2, negative by construction
  Rational pairing_with_class;  // exactly zero for every returned solution
};

/// All sphere classes with <w, S> = 0 and S^2 = self_intersection (< 0).
/// Requires equal rational exceptional coefficients (Z3-fixed class); for
/// such classes the solutions form at most one +/- orbit per
/// self-intersection and the search is closed-form.
std::vector<SphereClassSolution> lagrangian_solutions(const CohomologyClass& w,
                                                      long self_intersection);

/// Smallest k >= 1 such that lagrangian_solutions(w, -k) is nonempty, if
/// any; every realizable value is then k * (perfect square).
std::optional<Integer> min_lagrangian_self_intersection(const CohomologyClass& w);

struct TrichotomyResult {
  bool must_be_invariant = false;
  bool wminus_triggered = false;  // 3 * wminus >= wminus_budget
  bool ric0_triggered = false;    // 3 * ric0   >= ric0_budget
  std::string reason() const;
};

/// The Z3 trichotomy for one candidate against the compact-side budgets.
TrichotomyResult z3_trichotomy(const BubbleCandidate& c, const CompactBudgets& budgets);
TrichotomyResult z3_trichotomy(const EnergyQuantity& ric0, const EnergyQuantity& wminus,
                               const CompactBudgets& budgets);

enum class Verdict { kExcluded, kNotExcluded };
enum class KillReason {
  kEnergyBudget,              // single copy exceeds ric0 budget
  kTripleCopyBudget,          // three copies exceed a budget (non-invariant branch closed)
  kNoLagrangianSolution,      // no diagonal entry admits an invariant sphere class
  kSelfIntersectionMismatch,  // some entries realizable, others cannot be matched
};
enum class SurvivalReason {
  kTripleCopyFitsBudget,   // non-invariant formation fits both triple budgets
  kTripleCopyUnavailable,  // no Z3 symmetry assumed; trichotomy unavailable
  kLagrangianRealizable,   // forced invariant, every generator class realizable
};

std::string to_string(Verdict v);
std::string to_string(KillReason r);
std::string to_string(SurvivalReason r);

/// How many diagonal generators must admit invariant sphere classes.
enum class GeneratorPolicy { kAll, kAny };

struct ExclusionOptions {
  GeneratorPolicy generator_policy = GeneratorPolicy::kAll;
  long listing_box = 60;         ///< parameter cap for the per-case candidate listing
  std::size_t max_listed = 500;  ///< cap on listed outcomes per case
};

struct CandidateOutcome {
  BubbleCandidate candidate;
  EnergyQuantity ric0;
  EnergyQuantity wminus;
  std::optional<TrichotomyResult> trichotomy;  // present iff symmetry_order == 3 and within budget
  bool survived = false;
  std::optional<KillReason> kill_reason;
  std::optional<SurvivalReason> survival_reason;
  /// Parallel to the candidate's diagonal parameters; filled when the
  /// Lagrangian weapon was engaged.
  std::vector<std::vector<SphereClassSolution>> solutions_per_param;

  CandidateOutcome(BubbleCandidate c, EnergyQuantity r, EnergyQuantity w)
      : candidate(std::move(c)), ric0(std::move(r)), wminus(std::move(w)) {}
};

struct CaseReport {
  int b2 = 0;
  bool case_excluded = false;  ///< authoritative for this b2 (independent of listing caps)
  std::vector<CandidateOutcome> outcomes;  ///< enumerated within the listing box
  bool listing_complete = true;  ///< derived parameter bound fit inside the listing box
  std::vector<BubbleCandidate> surviving;
  bool all_listed_forced_invariant = false;
  /// Invariant sphere classes found for this case's diagonal parameters
  /// (deduplicated, ordered by -self-intersection).
  std::vector<SphereClassSolution> diophantine_solutions;
  /// Smallest realizable -self-intersection for invariant sphere classes.
  std::optional<Integer> min_lagrangian_self_int;
  /// The all-parameters-minimal Lagrangian-feasible candidate, typically
  /// killed by ENERGY_BUDGET: generators force parameters >= d before the
  /// budget is even consulted.
  std::optional<CandidateOutcome> minimal_feasible;
  /// Energy at which this case's non-invariant branch opens (3 * min W-
  /// energy equals the W- budget).
  EnergyQuantity noninvariant_flip_energy;
};

struct ExclusionReport {
  Verdict verdict = Verdict::kExcluded;
  ExclusionInput input;
  CompactBudgets budgets;
  Rational ric0_budget_over_8pi2;  ///< exact counterpart of the rounded 2.1
  std::array<CaseReport, 3> cases;
};

/// Decide the verdict only (cheap; no candidate listing).  Monotone in the
/// energy: lowering E0 can only keep or restore EXCLUDED.
Verdict exclusion_verdict(const ExclusionInput& input,
                          const ExclusionOptions& options = ExclusionOptions{});

/// Full per-case report.  Deterministic: identical inputs yield identical
/// reports; candidate ordering is canonical.
ExclusionReport exclude(const ExclusionInput& input,
                        const ExclusionOptions& options = ExclusionOptions{});

struct FlipThreshold {
  EnergyQuantity last_excluded;
  EnergyQuantity first_not_excluded;
};

/// Bracket the energy at which the verdict flips from EXCLUDED to
/// NOT_EXCLUDED, by exact-rational bisection to the given resolution
/// (coefficient of pi^2).
FlipThreshold find_flip_threshold(const CohomologyClass& w, int symmetry_order,
                                  const EnergyQuantity& futaki_norm_sq,
                                  const Rational& resolution_pi2 = Rational(1, 1024),
                                  const ExclusionOptions& options = ExclusionOptions{});

void to_json(nlohmann::json& j, const SphereClassSolution& s);
void to_json(nlohmann::json& j, const ExclusionReport& r);
/// Human-readable rendering mirroring the case 1/2/3 narrative.
std::string render_text(const ExclusionReport& r);

}  // namespace calabi
