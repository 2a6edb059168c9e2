// Command-line front end: class analysis, bubble exclusion, the torus flow
// and the candidate catalog, with machine-readable output.
//
// Exit codes (stable contract):
//   0  success (for `exclude`: verdict EXCLUDED; for `flow`: clean run)
//   1  exclude verdict NOT_EXCLUDED, or a requested check failed
//   2  parse/usage failure
//   3  class outside the Kahler cone
//   4  flow stiffness failure
//   5  internal error

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "calabi/exclusion.hpp"
#include "calabi/flow.hpp"
#include "json.hpp"

namespace {

using namespace calabi;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNotExcluded = 1;
constexpr int kExitParse = 2;
constexpr int kExitCone = 3;
constexpr int kExitStiffness = 4;
constexpr int kExitInternal = 5;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

// "x=1/2" expands to the Z3-symmetric class 3H - x(E1+E2+E3); the verbose
// form "h:3 e:1/2,1/2,1/2" covers general classes.
CohomologyClass parse_class_spec(const std::string& spec) {
  if (spec.rfind("x=", 0) == 0) return symmetric_kahler_class(Rational::parse(spec.substr(2)));
  std::optional<Rational> h;
  std::optional<RationalVector> e;
  for (const auto& tok : split(spec, ' ')) {
    if (tok.rfind("h:", 0) == 0) {
      h = Rational::parse(tok.substr(2));
    } else if (tok.rfind("e:", 0) == 0) {
      const auto parts = split(tok.substr(2), ',');
      RationalVector v(parts.size());
      for (std::size_t i = 0; i < parts.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = Rational::parse(parts[i]);
      e = std::move(v);
    } else {
      throw std::invalid_argument("unrecognized class token '" + tok + "'");
    }
  }
  if (!h || !e) throw std::invalid_argument("class spec needs both h: and e: (or x=p/q)");
  return CohomologyClass(*h, *e);
}

// Exact fraction of pi^2, or "B-" for just below the threshold B.
EnergyQuantity parse_energy_spec(const std::string& spec, const CohomologyClass& w,
                                 const EnergyQuantity& futaki) {
  if (spec == "B-")
    return energy_threshold_B(w, futaki) - EnergyQuantity(Rational(1, 1000000));
  return EnergyQuantity(Rational::parse(spec));
}

int run_analyze(const std::string& class_spec, const std::string& futaki_spec,
                const std::string& energy_spec, const std::string& format) {
  const CohomologyClass w = parse_class_spec(class_spec);
  const EnergyQuantity futaki{Rational::parse(futaki_spec)};
  if (!kahler_cone_contains(w.model(), w)) {
    std::cerr << "class " << w.str() << " is outside the Kahler cone\n";
    return kExitCone;
  }
  const ClassAnalysis a = analyze_class(w, futaki);
  const EnergyQuantity at =
      energy_spec.empty() ? a.lower_bound_A : parse_energy_spec(energy_spec, w, futaki);
  const SobolevBoundReport sob = sobolev_upper_bound(w, at, futaki);

  if (format == "text") {
    std::cout << "class: " << w.str() << "\n"
              << "A (Calabi energy lower bound): " << a.lower_bound_A.str() << "\n"
              << "B (energy threshold):          " << a.threshold_B.str() << "\n"
              << "Rbar^2 V:                      " << mean_scalar_data(w).rbar_sq_vol.str() << "\n"
              << "Tian cone: " << (a.in_tian_cone ? "yes" : "no")
              << ", generalized: " << (a.in_generalized_tian_cone ? "yes" : "no") << "\n"
              << "Sobolev bound at E = " << at.str() << ": "
              << (sob.bound_valid ? "valid, C_s <= " + std::to_string(*sob.sobolev_upper)
                                  : "not valid")
              << "\n";
  } else {
    json j = a;
    j["schema"] = 1;
    j["sobolev_at_energy"] = at.str();
    j["sobolev"] = sob;
    std::cout << j.dump(2) << "\n";
  }
  return kExitOk;
}

int run_exclude(const std::string& class_spec, const std::string& energy_spec, bool z3,
                const std::string& futaki_spec, const std::string& generators, long box,
                bool flip, const std::string& flip_resolution, const std::string& format) {
  const CohomologyClass w = parse_class_spec(class_spec);
  const EnergyQuantity futaki{Rational::parse(futaki_spec)};
  const EnergyQuantity energy = parse_energy_spec(energy_spec, w, futaki);
  ExclusionOptions opts;
  opts.listing_box = box;
  if (generators == "any")
    opts.generator_policy = GeneratorPolicy::kAny;
  else if (generators != "all")
    throw std::invalid_argument("--lagrangian-generators must be all or any");

  const ExclusionInput input{w, energy, z3 ? 3 : 1, futaki};
  const ExclusionReport rep = exclude(input, opts);

  std::optional<FlipThreshold> ft;
  if (flip)
    ft = find_flip_threshold(w, input.symmetry_order, futaki, Rational::parse(flip_resolution),
                             opts);

  if (format == "text") {
    std::cout << render_text(rep);
    if (ft)
      std::cout << "verdict flips between E = " << ft->last_excluded.str() << " and "
                << ft->first_not_excluded.str() << "\n";
  } else {
    json j = rep;
    if (ft) {
      j["flip_threshold"] = {{"last_excluded", ft->last_excluded.str()},
                             {"first_not_excluded", ft->first_not_excluded.str()}};
    }
    std::cout << j.dump(2) << "\n";
  }
  return rep.verdict == Verdict::kExcluded ? kExitOk : kExitNotExcluded;
}

Eigen::ArrayXXd parse_init_spec(const std::string& spec, int n) {
  if (spec == "zero") return phi_zero(n);
  if (spec.rfind("cos:", 0) == 0) {
    std::size_t pos = 0;
    const std::string arg = spec.substr(4);
    const double eps = std::stod(arg, &pos);
    if (pos != arg.size()) throw std::invalid_argument("bad cos amplitude '" + arg + "'");
    return phi_cosine(n, eps);
  }
  if (spec.rfind("random:", 0) == 0) {
    const auto parts = split(spec.substr(7), ',');
    if (parts.size() != 2) throw std::invalid_argument("random init needs 'random:seed,band'");
    return phi_random_band(n, std::stoull(parts[0]), std::stoi(parts[1]));
  }
  throw std::invalid_argument("unknown init spec '" + spec + "' (zero|cos:eps|random:seed,band)");
}

int run_flow_cmd(int grid, double tmax, const std::string& init, double rtol, double dt0,
                 double dtmax, double umin, const std::string& out, const std::string& format) {
  FlowConfig cfg;
  cfg.grid_size = grid;
  cfg.t_max = tmax;
  cfg.r_tol = rtol;
  cfg.dt_init = dt0;
  cfg.dt_max = dtmax;
  cfg.u_min = umin;
  cfg.validate();

  FlowState s = make_flow_state(grid, parse_init_spec(init, grid), cfg.u_min);
  const RunResult res = run_flow(std::move(s), cfg);

  {
    std::ofstream csv(out + ".csv");
    if (!csv) throw std::runtime_error("cannot open " + out + ".csv");
    write_history_csv(res.state, csv);
  }
  write_snapshot(res.state, out);

  const auto& last = res.state.history.back();
  if (format == "csv") {
    write_history_csv(res.state, std::cout);
  } else if (format == "text") {
    std::cout << "t = " << res.state.time << ", steps = " << res.state.history.size() - 1
              << ", calabi_energy = " << last.calabi_energy << ", max|R| = " << last.max_abs_r
              << ", converged = " << (res.converged ? "yes" : "no") << "\n";
  } else {
    json j{{"schema", 1},
           {"time", res.state.time},
           {"steps", res.state.history.size() - 1},
           {"calabi_energy", last.calabi_energy},
           {"max_abs_R", last.max_abs_r},
           {"total_area", last.total_area},
           {"converged", res.converged},
           {"outputs", {out + ".csv", out + ".phi.f64", out + ".u.f64", out + ".json"}}};
    std::cout << j.dump(2) << "\n";
  }
  return kExitOk;
}

int run_catalog(int b2, const std::string& budget_spec, const std::string& format) {
  const EnergyQuantity budget{Rational::parse(budget_spec)};
  const auto items = enumerate_candidates(b2, budget);
  if (format == "text") {
    std::cout << "candidates with b2 = " << b2 << ", ric0 < " << budget.str() << ":\n";
    for (const auto& c : items) {
      std::cout << "  (";
      for (std::size_t i = 0; i < c.params().size(); ++i) std::cout << (i ? "," : "") << c.params()[i];
      std::cout << ") |Gamma| = " << c.group_order() << ", ric0 = " << ric0_energy(c).str()
                << ", wminus = " << wminus_energy(c).str() << "\n";
    }
  } else {
    json j{{"schema", 1}, {"b2", b2}, {"ric0_budget", budget.str()}, {"candidates", items}};
    std::cout << j.dump(2) << "\n";
  }
  return kExitOk;
}

int run_check_interp(int grid, int count, unsigned long seed, int band, const std::string& rs,
                     const std::string& ps, const std::string& qs, double tol,
                     const std::string& format) {
  const Rational r = Rational::parse(rs), p = Rational::parse(ps), q = Rational::parse(qs);

  // Closed-form case first: T = cos(2 pi x) has int T^2 = 1/2,
  // int |grad T|^2 = 2 pi^2, int |grad^2 T|^2 = 8 pi^4.
  Eigen::ArrayXXd t0 = phi_cosine(grid, 1.0);
  const InterpolationCheck closed = interpolation_check(t0, Rational(1), Rational(2), Rational(2), tol);

  bool all_hold = closed.holds;
  int failures = 0;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    const Eigen::ArrayXXd t = phi_random_band(grid, rng(), band, 1.0);
    const InterpolationCheck c = interpolation_check(t, r, p, q, tol);
    if (!c.holds) {
      all_hold = false;
      ++failures;
    }
  }

  if (format == "text") {
    std::cout << "closed form cos(2 pi x): lhs = " << closed.lhs << ", rhs = " << closed.rhs
              << " (expect 2 pi^2, 4 pi^2)\n"
              << count << " random band-limited fields at r=" << rs << " p=" << ps << " q=" << qs
              << ": " << (all_hold ? "all hold" : std::to_string(failures) + " failures") << "\n";
  } else {
    json j{{"schema", 1},
           {"closed_form", {{"lhs", closed.lhs}, {"rhs", closed.rhs}, {"holds", closed.holds}}},
           {"random_fields", count},
           {"failures", failures},
           {"all_hold", all_hold}};
    std::cout << j.dump(2) << "\n";
  }
  return all_hold ? kExitOk : kExitNotExcluded;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature-energy budgets, ALE bubble exclusion and the torus Calabi flow"};
  app.require_subcommand(1);

  std::string class_spec, energy_spec, futaki_spec = "0", format = "json";
  std::string generators = "all", flip_resolution = "1/1024", init = "zero", out = "flow_run";
  bool z3 = false, flip = false;
  long box = 60;
  int grid = 64, b2 = 1, count = 200, band = 6;
  unsigned long seed = 1;
  double tmax = 1.0, rtol = 1e-8, dt0 = 1e-6, dtmax = 5e-3, umin = 0.05, tol = 1e-8;
  std::string budget_spec, rs = "1", ps = "2", qs = "2";

  auto* analyze = app.add_subcommand("analyze", "energy functionals and Sobolev bound of a class");
  analyze->add_option("class", class_spec, "class spec: x=p/q or 'h:3 e:a,b,c'")->required();
  analyze->add_option("--futaki", futaki_spec, "Futaki norm squared, fraction of pi^2");
  analyze->add_option("--energy", energy_spec, "energy for the Sobolev bound (default: A)");
  analyze->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  auto* excl = app.add_subcommand("exclude", "run the bubble-exclusion engine");
  excl->add_option("class", class_spec)->required();
  excl->add_option("--energy", energy_spec, "initial Calabi energy (fraction of pi^2, or B-)")
      ->required();
  excl->add_flag("--z3", z3, "initial data invariant under the cyclic Z3 action");
  excl->add_option("--futaki", futaki_spec);
  excl->add_option("--lagrangian-generators", generators, "all|any generators must be realizable")
      ->check(CLI::IsMember({"all", "any"}));
  excl->add_option("--box", box, "parameter cap for the candidate listing");
  excl->add_flag("--flip", flip, "also bracket the EXCLUDED -> NOT_EXCLUDED energy");
  excl->add_option("--flip-resolution", flip_resolution);
  excl->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  auto* flow_cmd = app.add_subcommand("flow", "run the torus Calabi flow");
  flow_cmd->add_option("--grid", grid, "grid size (power of two >= 16)");
  flow_cmd->add_option("--tmax", tmax);
  flow_cmd->add_option("--init", init, "zero | cos:eps | random:seed,band");
  flow_cmd->add_option("--rtol", rtol, "stop when max|R| < rtol");
  flow_cmd->add_option("--dt0", dt0);
  flow_cmd->add_option("--dt-max", dtmax);
  flow_cmd->add_option("--umin", umin);
  flow_cmd->add_option("--out", out, "output prefix for CSV and snapshots");
  flow_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "text", "csv"}));

  auto* cat = app.add_subcommand("catalog", "bubble candidates within a ric0 budget");
  cat->add_option("--b2", b2)->required()->check(CLI::Range(1, 3));
  cat->add_option("--budget", budget_spec, "ric0 budget as a fraction of pi^2")->required();
  cat->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  auto* interp = app.add_subcommand("check-interp", "test the tensor interpolation inequality");
  interp->add_option("--grid", grid);
  interp->add_option("--count", count);
  interp->add_option("--seed", seed);
  interp->add_option("--band", band);
  interp->add_option("--r", rs);
  interp->add_option("--p", ps);
  interp->add_option("--q", qs);
  interp->add_option("--tol", tol);
  interp->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*analyze) return run_analyze(class_spec, futaki_spec, energy_spec, format);
    if (*excl)
      return run_exclude(class_spec, energy_spec, z3, futaki_spec, generators, box, flip,
                         flip_resolution, format);
    if (*flow_cmd) return run_flow_cmd(grid, tmax, init, rtol, dt0, dtmax, umin, out, format);
    if (*cat) return run_catalog(b2, budget_spec, format);
    if (*interp) return run_check_interp(grid, count, seed, band, rs, ps, qs, tol, format);
  } catch (const StiffnessFailureError& e) {
    std::cerr << "stiffness failure: " << e.what() << "\n";
    return kExitStiffness;
  } catch (const DegenerateClassError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCone;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
