#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmereact/barrier.hpp"
#include "pmereact/density.hpp"
#include "pmereact/feasibility.hpp"
#include "pmereact/solver.hpp"

namespace pmr {

struct Check {
  std::string name;
  bool pass = true;
  double worst = 0.0;  // largest violation (<= 0 when passing), or the checked quantity
  double r = 0.0;
  double t = 0.0;
  std::string detail;
};

struct Verdict {
  std::vector<Check> checks;
  bool overall = true;
  // Solver stopped early for a reason other than blow-up; overall is false.
  bool inconclusive = false;

  void add(Check check);
  const Check* find(std::string_view name) const;
};

enum class InitialData { Barrier, Scaled, Constant, Table };

std::string_view to_string(InitialData kind);
InitialData parse_initial_data(std::string_view name);

struct InitialDataRule {
  InitialData kind = InitialData::Barrier;
  double factor = 1.0;  // Scaled
  double value = 0.0;   // Constant
  std::vector<std::pair<double, double>> table;  // Table: (r, u), linear in r, zero beyond the last radius
};

struct Scenario {
  std::string name = "scenario";
  ProblemConstants constants;
  DensityParams density;
  // rho = 1 in the solver (validation runs); barrier checks still use `density`.
  bool uniform_density = false;
  Regime regime = Regime::GE2;
  std::optional<BarrierParams> barrier;  // absent: find_params
  SearchConfig search;
  InitialDataRule initial;
  double R = 0.0;  // 0: twice the barrier support radius over the run
  std::size_t cells = 512;
  SolverConfig solver;
  bool t_end_set = false;  // false: 10 T for GE regimes, 1.05 T for Blowup
  std::size_t output_count = 100;
  std::uint64_t seed = 1;
};

struct PreparedScenario {
  Density density;
  BarrierParams params;
  FeasibilityReport report;
  Barrier barrier;
  RadialGrid grid;
  RadialFunction rho;
  State u0;
  SolverConfig solver;
};

// Resolves density, barrier parameters, grid, initial data and the solver time horizon.
PreparedScenario prepare(const Scenario& scenario);

// Sample points for residual sweeps: nt times x nr radii strictly inside smooth pieces.
//   GE1: log-spaced r in [1e-3, 1e4], t in (0, t_max] (t_max <= 0 means 10 T).
//   GE2: r in (0, r*(t)), t in (0, t_max].  Blowup: r in (0, r*(t)) avoiding r = e, t in (0, T).
std::vector<std::pair<double, double>> sweep_points(const Barrier& barrier, std::size_t nr = 200, std::size_t nt = 50,
                                                    double t_max = 0.0);

// Supersolutions: residual >= -1e-10 scale; subsolution: residual <= 1e-10 scale, scale = |w^p| + |w_t|.
// Throws InfeasibleBarrier when `report` is given and fails.
Verdict residual_sweep(const Barrier& barrier, const RadialFunction& rho,
                       std::span<const std::pair<double, double>> points, const FeasibilityReport* report = nullptr);

// Cellwise bound of the barrier over [face_i, face_i+1]: max for supersolutions, min for the subsolution.
double cell_bound(const Barrier& barrier, const RadialGrid& grid, std::size_t cell, double t);

// Numeric support vs closed-form support at every series point with t <= t_cut.
// GE2: numeric <= closed + dr. Blowup: numeric >= closed - dr.
Check support_inclusion_check(const RunResult& run, const Barrier& barrier, const RadialGrid& grid,
                              double t_cut = std::numeric_limits<double>::infinity());

// Solver vs barrier at every snapshot with t <= t_cut, tolerance 1e-8 + 1e-3 |bound|.
Check barrier_comparison(const RunResult& run, const Barrier& barrier, const RadialGrid& grid,
                         double t_cut = std::numeric_limits<double>::infinity());

struct ComparisonOutcome {
  Verdict verdict;
  RunResult run;
  FeasibilityReport report;
  BarrierParams params;
  double R = 0.0;
};

ComparisonOutcome comparison_experiment(const Scenario& scenario);

// Analytic w_t, (w^m)_r, (w^m)_rr against long double central differences (time step 1e-5,
// radial step 1e-5 max(1, r)) at
// `samples` seeded random interior points; relative error <= 1e-6.
Verdict derivative_crosscheck(const Barrier& barrier, std::size_t samples = 1000, std::uint64_t seed = 1);

// Inner and outer (w^m)_r at r = e against the closed form, relative error <= 1e-12,
// at `samples` seeded random times in (0, T).
Check flux_matching_check(const BlowupSubsolution& barrier, std::size_t samples = 100, std::uint64_t seed = 1);

struct ScanEntry {
  double factor = 1.0;
  double sup0 = 0.0;
  double tau0 = 0.0;
  bool blowup = false;
  double S_num = 0.0;
  Termination reason = Termination::Completed;
};

struct ScanOutcome {
  std::vector<ScanEntry> entries;  // in factor order
  Verdict verdict;
};

// Runs the scenario's initial data scaled by each factor on `workers` threads.
ScanOutcome blow_up_scan(const Scenario& scenario, std::span<const double> factors, unsigned workers = 1);

}  // namespace pmr
