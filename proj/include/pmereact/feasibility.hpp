#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pmereact/barrier.hpp"
#include "pmereact/density.hpp"

namespace pmr {

// GE1a: global existence for p < m; GE1b: global existence for p > m (both under H1).
// GE2: compactly supported global existence for p > m; Blowup: finite-time blow-up for p > m.
enum class Regime { GE1a, GE1b, GE2, Blowup };

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view name);

// Throws UnsupportedRegime when p vs m does not match the regime.
void check_regime(Regime regime, const ProblemConstants& constants);

// Lower bound used for (1/rho) (log(r+r0))^(bbar-1)/(r+r0)^2 in the GE2 growth condition:
// Unit: >= k1 (log(r+r0) >= 1); LogR0: >= k1 log r0 (identical at r0 = e, strictly weaker requirement for r0 > e).
enum class Ge2Bound { Unit, LogR0 };

std::string_view to_string(Ge2Bound bound);
Ge2Bound parse_ge2_bound(std::string_view name);

struct Inequality {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool pass = false;
  bool strict = false;
  // Location of the worst time sample for time-dependent checks.
  std::optional<double> t;
};

// lhs <= rhs (or lhs < rhs when strict).
Inequality make_inequality(std::string name, double lhs, double rhs, bool strict = false);

struct BarrierParams {
  double C = 0.0;
  double a = 0.0;
  double T = 1.0;
  double beta = 0.0;
  double b = 0.5;
  double eps = 0.5;
  double r0 = kE;
};

struct FeasibilityReport {
  Regime mode = Regime::GE1a;
  std::vector<Inequality> inequalities;
  BarrierParams params;
  double omega = 0.0;  // C^(m-1)/a, p > m regimes only
  std::map<std::string, double> derived;
  std::optional<std::pair<double, double>> omega_window;
  bool overall = false;

  const Inequality* find(std::string_view name) const;
  std::vector<std::string> failures() const;
};

// ((m-1)/(p+m-2))^((m-1)/(p-1)) - ((m-1)/(p+m-2))^((p+m-2)/(p-1)).
double K_const(const ProblemConstants& constants);

// Density must be H1.
FeasibilityReport check_ge1(const ProblemConstants& constants, const Density& density,
                            const GE1Barrier::Params& params);
// Density must be H2Smooth; params.r0 is taken from the density.
FeasibilityReport check_ge2(const ProblemConstants& constants, const Density& density,
                            const GE2Barrier::Params& params, Ge2Bound bound = Ge2Bound::Unit);
// Density must be H2 or H2Smooth.
FeasibilityReport check_blowup(const ProblemConstants& constants, const Density& density,
                               const BlowupSubsolution::Params& params);

FeasibilityReport check_regime_params(Regime regime, const ProblemConstants& constants, const Density& density,
                                      const BarrierParams& params, Ge2Bound bound = Ge2Bound::Unit);

Barrier make_barrier(Regime regime, const ProblemConstants& constants, const Density& density,
                     const BarrierParams& params);

// Time-pointwise conditions of the sub/supersolution propositions, evaluated for the concrete
// zeta, eta of each barrier on `samples` times: [0, t_max] for GE barriers, (0, T) for Blowup.
// Each entry reports the sample with the smallest relative slack.
std::vector<Inequality> proposition_checks(const Barrier& barrier, const Density& density,
                                           Ge2Bound bound = Ge2Bound::Unit, std::size_t samples = 1000,
                                           double t_max = 10.0);

struct SearchConfig {
  double margin = 0.01;  // relative slack required on the C-dependent inequalities
  double omega_min = 1e-3;
  double omega_max = 1.0;
  std::size_t omega_points = 121;
  double C_min = 1e-8;
  double C_max = 1e8;
  int bisection_steps = 200;
  std::optional<double> T;  // default 2 for GE1a, 1 otherwise
  std::optional<double> beta;
  std::optional<double> b;
  std::optional<double> eps;
  Ge2Bound bound = Ge2Bound::Unit;
};

struct SearchResult {
  BarrierParams params;
  FeasibilityReport report;
};

// Deterministic constructive search.
//   GE1a:   smallest C passing with margin (b, eps, beta default to admissible midpoints).
//   GE1b:   largest C passing with margin.
//   GE2:    omega on a log grid, largest C per omega; keeps the omega with the largest C and
//           reports the feasible omega window.
//   Blowup: omega on a log grid, smallest C per omega; keeps the largest feasible omega.
// Throws InfeasibleWithinBudget when the grids are exhausted.
SearchResult find_params(Regime regime, const ProblemConstants& constants, const Density& density,
                         const SearchConfig& config = {});

}  // namespace pmr
