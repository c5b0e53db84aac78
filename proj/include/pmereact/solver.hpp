#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmereact/density.hpp"

namespace pmr {

enum class Boundary { Dirichlet0, Neumann0 };

std::string_view to_string(Boundary boundary);
Boundary parse_boundary(std::string_view name);

/// Uniform cell-centred grid on [0, R] for radial functions in R^N.
struct RadialGrid {
  RadialGrid(int N, double R, std::size_t cells);

  int N;
  double R;
  double dr;
  std::vector<double> centers;  // (i + 1/2) dr
  std::vector<double> faces;    // i dr, i = 0..cells
  std::vector<double> volumes;  // (faces[i+1]^N - faces[i]^N)/N
  std::vector<double> areas;    // faces[i]^(N-1)

  std::size_t size() const { return centers.size(); }
};

struct State {
  double t = 0.0;
  std::vector<double> u;
};

struct SolverConfig {
  double cfl_safety = 0.45;
  double blowup_threshold = 1e6;
  double t_end = 1.0;
  // Empty: 101 equispaced times on [0, t_end]. t = 0 is always recorded.
  std::vector<double> output_times;
  Boundary boundary = Boundary::Dirichlet0;
  bool reaction = true;
  // Reaction step limit dt <= reaction_fraction * sup(u)^(1-p).
  double reaction_fraction = 0.01;
  // Keep a full snapshot at every k-th output time.
  std::size_t snapshot_stride = 1;
  std::uint64_t max_steps = 4'000'000'000ULL;
  double support_threshold = 1e-12;

  void validate() const;
};

struct SeriesPoint {
  double t = 0.0;
  double sup_norm = 0.0;
  double support_radius = 0.0;
};

struct Snapshot {
  double t = 0.0;
  std::vector<double> u;
};

enum class Termination { Completed, Blowup, Overflow, StepLimit };

std::string_view to_string(Termination reason);

struct BlowupRecord {
  double S_num = 0.0;
  double last_sup = 0.0;  // last finite sup-norm before the crossing
  bool overflow = false;
};

struct RunResult {
  std::vector<SeriesPoint> series;
  std::vector<Snapshot> snapshots;
  std::optional<BlowupRecord> blowup;
  Termination reason = Termination::Completed;
  double tau0 = std::numeric_limits<double>::infinity();
  std::uint64_t steps = 0;
  double clamp_total = 0.0;
  State final_state;
};

struct StepInfo {
  double dt = 0.0;
  double clamped = 0.0;  // total magnitude removed by the nonnegativity clamp
  double sup = 0.0;
};

// Largest face radius beyond which every cell is <= threshold; 0 for an all-zero state.
double support_radius_numeric(const State& state, const RadialGrid& grid, double threshold = 1e-12);

/// Explicit conservative finite-volume scheme for
///   rho u_t = r^(1-N) (r^(N-1) (u^m)_r)_r + rho u^p
/// with a zero-flux inner face and the configured outer boundary.
class RadialSolver {
 public:
  RadialSolver(RadialGrid grid, const RadialFunction& rho, ProblemConstants constants, SolverConfig config);

  const RadialGrid& grid() const { return grid_; }
  const SolverConfig& config() const { return config_; }
  const std::vector<double>& rho_cells() const { return rho_; }

  // Diffusion limit intersected with the reaction limit (infinite for u = 0 without reaction).
  double stable_dt(const State& state) const;

  // One step of size min(dt_cap, stable_dt).
  StepInfo step(State& state, double dt_cap = std::numeric_limits<double>::infinity()) const;

  RunResult run(State u0) const;

  // Weighted mass sum rho_i V_i u_i.
  double mass(const State& state) const;

 private:
  std::size_t active_limit(const State& state) const;
  StepInfo advance(const std::vector<double>& u, std::vector<double>& out, std::size_t limit, double dt) const;
  double stable_dt(const std::vector<double>& u, std::size_t limit, double sup) const;

  RadialGrid grid_;
  ProblemConstants constants_;
  SolverConfig config_;
  std::vector<double> rho_;
  std::vector<double> inv_rho_vol_;
};

RunResult run(const State& u0, const RadialGrid& grid, const RadialFunction& rho, const ProblemConstants& constants,
              const SolverConfig& config);

// 1/((p-1) sup(u0)^(p-1)); infinite for zero data.
double tau0(const std::vector<double>& u0, double p);

}  // namespace pmr
