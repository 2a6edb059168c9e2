#pragma once

#include <stdexcept>
#include <string>

namespace calabi {

/// Classes living on surfaces with different blow-up counts cannot be paired.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operation implemented only for the three-point blow-up of CP^2.
struct UnsupportedSurfaceError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The diophantine sphere-class solver requires a Z3-symmetric class
/// (equal rational coefficients on all exceptional divisors).
struct UnsupportedSymmetryError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Class with nonpositive self-intersection where a Kahler class is required.
struct DegenerateClassError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Bubble candidate whose group order vanishes (or whose intersection form
/// fails to be negative definite).
struct DegenerateCandidateError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Energy below the unconstrained minimum Rbar^2 V of the class.
struct InconsistentEnergyError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Metric positivity u > u_min failed; carries the offending grid cell.
struct FlowBreakdownError : std::runtime_error {
  FlowBreakdownError(int i, int j, double u_value)
      : std::runtime_error("metric density nonpositive at cell (" + std::to_string(i) + "," +
                           std::to_string(j) + "): u = " + std::to_string(u_value)),
        cell_i(i),
        cell_j(j),
        u(u_value) {}
  int cell_i;
  int cell_j;
  double u;
};

/// Adaptive time stepper halved dt below dt_min without finding an
/// acceptable step.
struct StiffnessFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace calabi
