#include "pmereact/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmereact/errors.hpp"

namespace pmr {

namespace {

// x^e with a multiply chain for small integer exponents.
class Power {
 public:
  explicit Power(double e) : e_(e) {
    const double r = std::round(e);
    if (r == e && r >= 0.0 && r <= 8.0) n_ = static_cast<int>(r);
  }

  double operator()(double x) const {
    switch (n_) {
      case 0: return 1.0;
      case 1: return x;
      case 2: return x * x;
      case 3: return x * x * x;
      case 4: { const double y = x * x; return y * y; }
      case -1: return x == 0.0 ? 0.0 : std::pow(x, e_);
      default: {
        double y = x;
        for (int k = 1; k < n_; ++k) y *= x;
        return y;
      }
    }
  }

 private:
  double e_;
  int n_ = -1;
};

// (b^N - a^N)/N without cancellation.
double shell_volume(double a, double b, int N) {
  double sum = 0.0;
  for (int k = 0; k < N; ++k) sum += std::pow(b, k) * std::pow(a, N - 1 - k);
  return (b - a) * sum / N;
}

std::vector<double> output_schedule(const SolverConfig& cfg, double t0) {
  std::vector<double> out{t0};
  if (cfg.output_times.empty()) {
    for (int k = 1; k <= 100; ++k) out.push_back(t0 + (cfg.t_end - t0) * k / 100.0);
  } else {
    for (double t : cfg.output_times) {
      if (t > t0 && t <= cfg.t_end) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::string_view to_string(Boundary boundary) {
  return boundary == Boundary::Dirichlet0 ? "dirichlet0" : "neumann0";
}

Boundary parse_boundary(std::string_view name) {
  if (name == "dirichlet0" || name == "Dirichlet0" || name == "dirichlet") return Boundary::Dirichlet0;
  if (name == "neumann0" || name == "Neumann0" || name == "neumann") return Boundary::Neumann0;
  throw InvalidParameter("unknown boundary '" + std::string(name) + "' (expected dirichlet0 or neumann0)");
}

std::string_view to_string(Termination reason) {
  switch (reason) {
    case Termination::Completed: return "completed";
    case Termination::Blowup: return "blowup";
    case Termination::Overflow: return "overflow";
    case Termination::StepLimit: return "step_limit";
  }
  return "?";
}

RadialGrid::RadialGrid(int N_, double R_, std::size_t cells) : N(N_), R(R_), dr(R_ / static_cast<double>(cells)) {
  if (N < 1) throw InvalidParameter("grid dimension must be positive");
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidParameter("grid radius R must be positive");
  if (cells < 2) throw InvalidParameter("grid needs at least 2 cells");
  centers.resize(cells);
  faces.resize(cells + 1);
  volumes.resize(cells);
  areas.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    faces[i] = dr * static_cast<double>(i);
    areas[i] = std::pow(faces[i], N - 1);
  }
  for (std::size_t i = 0; i < cells; ++i) {
    centers[i] = dr * (static_cast<double>(i) + 0.5);
    volumes[i] = shell_volume(faces[i], faces[i + 1], N);
  }
}

void SolverConfig::validate() const {
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw InvalidParameter("cfl_safety must lie in (0, 1]");
  if (!(t_end > 0.0)) throw InvalidParameter("t_end must be positive");
  if (!(blowup_threshold > 0.0)) throw InvalidParameter("blowup_threshold must be positive");
  if (!(reaction_fraction > 0.0 && reaction_fraction <= 0.1)) {
    throw InvalidParameter("reaction_fraction must lie in (0, 0.1]");
  }
  if (snapshot_stride == 0) throw InvalidParameter("snapshot_stride must be at least 1");
  if (!(support_threshold >= 0.0)) throw InvalidParameter("support_threshold must be nonnegative");
}

double support_radius_numeric(const State& state, const RadialGrid& grid, double threshold) {
  for (std::size_t i = state.u.size(); i-- > 0;) {
    if (state.u[i] > threshold) return grid.faces[i + 1];
  }
  return 0.0;
}

double tau0(const std::vector<double>& u0, double p) {
  const double sup = u0.empty() ? 0.0 : *std::max_element(u0.begin(), u0.end());
  if (!(sup > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / ((p - 1.0) * std::pow(sup, p - 1.0));
}

RadialSolver::RadialSolver(RadialGrid grid, const RadialFunction& rho, ProblemConstants constants,
                           SolverConfig config)
    : grid_(std::move(grid)), constants_(constants), config_(std::move(config)) {
  constants_.validate();
  config_.validate();
  if (grid_.N != constants_.N) throw InvalidParameter("grid dimension differs from N");
  rho_.resize(grid_.size());
  inv_rho_vol_.resize(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    rho_[i] = rho(grid_.centers[i]);
    if (!(rho_[i] > 0.0) || !std::isfinite(rho_[i])) {
      throw InvalidParameter("density must be positive and finite, got " + std::to_string(rho_[i]) + " at r = " +
                             std::to_string(grid_.centers[i]));
    }
    inv_rho_vol_[i] = 1.0 / (rho_[i] * grid_.volumes[i]);
  }
}

std::size_t RadialSolver::active_limit(const State& state) const {
  std::size_t last = 0;
  for (std::size_t i = 0; i < state.u.size(); ++i) {
    if (state.u[i] != 0.0) last = i + 1;
  }
  return std::min(last, grid_.size() - 1);
}

double RadialSolver::stable_dt(const std::vector<double>& u, std::size_t limit, double sup) const {
  const Power pm1(constants_.m - 1.0);
  const double denom0 = 2.0 * grid_.N * constants_.m;
  const double dr2 = grid_.dr * grid_.dr;
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= limit; ++i) {
    double umax = u[i];
    if (i > 0) umax = std::max(umax, u[i - 1]);
    if (i + 1 < u.size()) umax = std::max(umax, u[i + 1]);
    if (umax <= 0.0) continue;
    dt = std::min(dt, rho_[i] * dr2 / (denom0 * pm1(umax)));
  }
  dt *= config_.cfl_safety;
  if (config_.reaction && sup > 0.0) {
    dt = std::min(dt, config_.reaction_fraction * std::pow(sup, 1.0 - constants_.p));
  }
  return dt;
}

double RadialSolver::stable_dt(const State& state) const {
  if (state.u.size() != grid_.size()) throw InvalidParameter("state size differs from grid size");
  const double sup = *std::max_element(state.u.begin(), state.u.end());
  return stable_dt(state.u, active_limit(state), sup);
}

StepInfo RadialSolver::advance(const std::vector<double>& u, std::vector<double>& out, std::size_t limit,
                               double dt) const {
  const Power pm(constants_.m);
  const Power pp(constants_.p);
  const std::size_t n = grid_.size();
  const double inv_dr = 1.0 / grid_.dr;
  const bool dirichlet = config_.boundary == Boundary::Dirichlet0;
  const auto& A = grid_.areas;

  StepInfo info;
  info.dt = dt;
  double w_here = pm(u[0]);
  double F_minus = 0.0;
  for (std::size_t i = 0; i <= limit; ++i) {
    double F_plus;
    double w_next = 0.0;
    if (i + 1 < n) {
      w_next = u[i + 1] == 0.0 ? 0.0 : pm(u[i + 1]);
      F_plus = A[i + 1] * (w_next - w_here) * inv_dr;
    } else {
      F_plus = dirichlet ? -2.0 * A[n] * w_here * inv_dr : 0.0;
    }
    double v = u[i] + dt * inv_rho_vol_[i] * (F_plus - F_minus);
    if (config_.reaction) v += dt * pp(u[i]);
    if (v < 0.0) {
      info.clamped -= v;
      v = 0.0;
    }
    out[i] = v;
    if (!(v <= info.sup) && !std::isnan(info.sup)) info.sup = v;  // NaN is sticky
    F_minus = F_plus;
    w_here = w_next;
  }
  return info;
}

StepInfo RadialSolver::step(State& state, double dt_cap) const {
  if (state.u.size() != grid_.size()) throw InvalidParameter("state size differs from grid size");
  const std::size_t limit = active_limit(state);
  const double sup = *std::max_element(state.u.begin(), state.u.end());
  double dt = std::min(stable_dt(state.u, limit, sup), dt_cap);
  if (!std::isfinite(dt)) throw InvalidParameter("step needs a finite dt cap for a stationary state");
  std::vector<double> out = state.u;
  StepInfo info = advance(state.u, out, limit, dt);
  state.u = std::move(out);
  state.t += dt;
  return info;
}

double RadialSolver::mass(const State& state) const {
  double total = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) total += rho_[i] * grid_.volumes[i] * state.u[i];
  return total;
}

RunResult RadialSolver::run(State u0) const {
  const std::size_t n = grid_.size();
  if (u0.u.size() != n) throw InvalidParameter("initial data size differs from grid size");
  double sup = 0.0;
  for (double v : u0.u) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidParameter("initial data must be finite and nonnegative");
    sup = std::max(sup, v);
  }
  if (!(sup < config_.blowup_threshold)) throw InvalidParameter("blowup_threshold must exceed sup of initial data");
  if (!(config_.t_end > u0.t)) throw InvalidParameter("t_end must exceed the initial time");

  RunResult result;
  result.tau0 = tau0(u0.u, constants_.p);
  const std::vector<double> outputs = output_schedule(config_, u0.t);
  std::size_t next_out = 0;
  std::size_t out_count = 0;

  std::vector<double> cur = std::move(u0.u);
  std::vector<double> nxt(n, 0.0);
  std::vector<double> scratch(n, 0.0);
  double t = u0.t;

  const auto record = [&](double when, const std::vector<double>& u) {
    State s{when, u};
    result.series.push_back({when, *std::max_element(u.begin(), u.end()),
                             support_radius_numeric(s, grid_, config_.support_threshold)});
    if (out_count % config_.snapshot_stride == 0) result.snapshots.push_back({when, std::move(s.u)});
    ++out_count;
  };
  const auto record_between = [&](double t_a, double t_b, double upto, bool inclusive) {
    while (next_out < outputs.size()) {
      const double tau = outputs[next_out];
      if (inclusive ? tau > upto : tau >= upto) break;
      const double theta = t_b > t_a ? (tau - t_a) / (t_b - t_a) : 1.0;
      for (std::size_t i = 0; i < n; ++i) scratch[i] = (1.0 - theta) * cur[i] + theta * nxt[i];
      record(tau, scratch);
      ++next_out;
    }
  };

  if (!outputs.empty() && outputs.front() == t) {
    record(t, cur);
    ++next_out;
  }

  std::size_t limit = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cur[i] != 0.0) limit = i + 1;
  }
  limit = std::min(limit, n - 1);

  while (t < config_.t_end) {
    if (result.steps >= config_.max_steps) {
      result.reason = Termination::StepLimit;
      break;
    }
    double dt = stable_dt(cur, limit, sup);
    const bool last = !(dt < config_.t_end - t);
    if (last) dt = config_.t_end - t;
    const StepInfo info = advance(cur, nxt, limit, dt);
    const double t_new = last ? config_.t_end : t + dt;
    ++result.steps;
    result.clamp_total += info.clamped;

    if (!std::isfinite(info.sup)) {
      result.reason = Termination::Overflow;
      result.blowup = BlowupRecord{t, sup, true};
      break;
    }
    if (info.sup >= config_.blowup_threshold) {
      const double S = t + (config_.blowup_threshold - sup) / (info.sup - sup) * (t_new - t);
      record_between(t, t_new, S, false);
      result.reason = Termination::Blowup;
      result.blowup = BlowupRecord{S, sup, false};
      std::swap(cur, nxt);
      t = t_new;
      break;
    }
    record_between(t, t_new, t_new, true);
    for (std::size_t i = limit + 1; i-- > 0;) {
      if (nxt[i] != 0.0) {
        limit = std::max(limit, std::min(i + 1, n - 1));
        break;
      }
    }
    std::swap(cur, nxt);
    t = t_new;
    sup = info.sup;
  }

  result.final_state = State{t, std::move(cur)};
  return result;
}

RunResult run(const State& u0, const RadialGrid& grid, const RadialFunction& rho, const ProblemConstants& constants,
              const SolverConfig& config) {
  return RadialSolver(grid, rho, constants, config).run(u0);
}

}  // namespace pmr
