#include "pmereact/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "pmereact/errors.hpp"

namespace pmr {

namespace {

double horizon_T(const Barrier& barrier) {
  return std::visit([](const auto& b) { return b.params().T; }, barrier);
}

double closed_support(const Barrier& barrier, double t) {
  const SupportRadius s = support_radius(barrier, t);
  return s.kind == SupportRadius::Kind::Finite || s.kind == SupportRadius::Kind::Infinite ? s.radius : 0.0;
}

std::vector<double> linspace(double a, double b, std::size_t intervals) {
  std::vector<double> out(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    out[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(intervals);
  }
  return out;
}

double table_value(const std::vector<std::pair<double, double>>& table, double r) {
  if (table.empty() || r > table.back().first) return 0.0;
  if (r <= table.front().first) return table.front().second;
  const auto it = std::lower_bound(table.begin(), table.end(), r,
                                   [](const auto& e, double x) { return e.first < x; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double s = (r - lo.first) / (hi.first - lo.first);
  return (1.0 - s) * lo.second + s * hi.second;
}

struct StateCompare {
  double worst = -std::numeric_limits<double>::infinity();
  double r = 0.0;
};

// Largest (u - bound - tol) for upper barriers, (bound - u - tol) for lower ones.
StateCompare compare_state(const std::vector<double>& u, const Barrier& barrier, const RadialGrid& grid, double t) {
  const bool upper = is_supersolution(barrier);
  StateCompare out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double bound = cell_bound(barrier, grid, i, t);
    const double tol = 1e-8 + 1e-3 * std::abs(bound);
    const double v = upper ? u[i] - bound - tol : bound - u[i] - tol;
    if (v > out.worst) {
      out.worst = v;
      out.r = grid.centers[i];
    }
  }
  return out;
}

}  // namespace

void Verdict::add(Check check) {
  overall = overall && check.pass;
  checks.push_back(std::move(check));
}

const Check* Verdict::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string_view to_string(InitialData kind) {
  switch (kind) {
    case InitialData::Barrier: return "barrier";
    case InitialData::Scaled: return "scaled";
    case InitialData::Constant: return "constant";
    case InitialData::Table: return "table";
  }
  return "?";
}

InitialData parse_initial_data(std::string_view name) {
  if (name == "barrier") return InitialData::Barrier;
  if (name == "scaled") return InitialData::Scaled;
  if (name == "constant") return InitialData::Constant;
  if (name == "table") return InitialData::Table;
  throw InvalidParameter("unknown initial_data '" + std::string(name) + "' (expected barrier, scaled, constant or table)");
}

PreparedScenario prepare(const Scenario& s) {
  s.constants.validate();
  check_regime(s.regime, s.constants);
  Density density(s.density);

  BarrierParams params;
  if (s.barrier) {
    params = *s.barrier;
    params.r0 = density.params().r0;
  } else {
    params = find_params(s.regime, s.constants, density, s.search).params;
  }
  FeasibilityReport report = check_regime_params(s.regime, s.constants, density, params, s.search.bound);
  Barrier barrier = make_barrier(s.regime, s.constants, density, params);

  SolverConfig solver = s.solver;
  if (!s.t_end_set) solver.t_end = s.regime == Regime::Blowup ? 1.05 * params.T : 10.0 * params.T;

  double R = s.R;
  if (!(R > 0.0)) {
    switch (s.regime) {
      case Regime::GE2: R = 2.0 * closed_support(barrier, solver.t_end); break;
      case Regime::Blowup: R = 2.0 * closed_support(barrier, 0.0); break;
      default: throw InvalidParameter("GE1 scenarios need an explicit truncation radius R");
    }
    if (!(R > 0.0)) throw InvalidParameter("barrier support is empty; set R explicitly");
  }
  RadialGrid grid(s.constants.N, R, s.cells);

  RadialFunction rho = s.uniform_density ? RadialFunction([](double) { return 1.0; }) : density.as_function();

  State u0;
  u0.u.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.centers[i];
    switch (s.initial.kind) {
      case InitialData::Barrier: u0.u[i] = eval(barrier, r, 0.0); break;
      case InitialData::Scaled: u0.u[i] = s.initial.factor * eval(barrier, r, 0.0); break;
      case InitialData::Constant: u0.u[i] = s.initial.value; break;
      case InitialData::Table: u0.u[i] = table_value(s.initial.table, r); break;
    }
  }
  if (solver.output_times.empty()) solver.output_times = linspace(0.0, solver.t_end, s.output_count);

  return {std::move(density), params, std::move(report), std::move(barrier), std::move(grid), std::move(rho),
          std::move(u0), std::move(solver)};
}

std::vector<std::pair<double, double>> sweep_points(const Barrier& barrier, std::size_t nr, std::size_t nt,
                                                    double t_max) {
  const double T = horizon_T(barrier);
  if (!(t_max > 0.0)) t_max = 10.0 * T;
  std::vector<std::pair<double, double>> pts;
  pts.reserve(nr * nt);
  const bool blowup = std::holds_alternative<BlowupSubsolution>(barrier);
  for (std::size_t j = 0; j < nt; ++j) {
    const double t = blowup ? T * static_cast<double>(j + 1) / static_cast<double>(nt + 1)
                            : t_max * static_cast<double>(j + 1) / static_cast<double>(nt);
    if (std::holds_alternative<GE1Barrier>(barrier)) {
      for (std::size_t i = 0; i < nr; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(nr - 1);
        pts.emplace_back(std::exp(std::log(1e-3) + s * (std::log(1e4) - std::log(1e-3))), t);
      }
      continue;
    }
    const SupportRadius sr = support_radius(barrier, t);
    if (sr.kind != SupportRadius::Kind::Finite) continue;
    for (std::size_t i = 0; i < nr; ++i) {
      const double r = sr.radius * (static_cast<double>(i) + 0.5) / static_cast<double>(nr);
      if (std::abs(r - sr.radius) < 1e-6 * sr.radius) continue;
      if (blowup && std::abs(r - kE) < 1e-6) continue;
      pts.emplace_back(r, t);
    }
  }
  return pts;
}

Verdict residual_sweep(const Barrier& barrier, const RadialFunction& rho,
                       std::span<const std::pair<double, double>> points, const FeasibilityReport* report) {
  if (report && !report->overall) {
    std::string failed;
    for (const auto& f : report->failures()) failed += (failed.empty() ? "" : ", ") + f;
    throw InfeasibleBarrier("barrier parameters fail their feasibility report (" + failed + ")");
  }
  const bool upper = is_supersolution(barrier);
  const double p = barrier_constants(barrier).p;
  Check c;
  c.name = upper ? "residual_nonnegative" : "residual_nonpositive";
  c.worst = -std::numeric_limits<double>::infinity();
  std::size_t skipped = 0;
  for (const auto& [r, t] : points) {
    Derivatives d;
    double res;
    try {
      d = eval_derivatives(barrier, r, t);
      res = residual(barrier, rho, r, t);
    } catch (const KinkError&) {
      ++skipped;
      continue;
    }
    const double w = eval(barrier, r, t);
    const double scale = std::abs(std::pow(w, p)) + std::abs(d.w_t);
    const double v = upper ? -res - 1e-10 * scale : res - 1e-10 * scale;
    if (v > c.worst) {
      c.worst = v;
      c.r = r;
      c.t = t;
    }
  }
  c.pass = c.worst <= 0.0;
  c.detail = std::to_string(points.size() - skipped) + " points";
  if (skipped) c.detail += ", " + std::to_string(skipped) + " on interfaces skipped";
  Verdict v;
  v.add(std::move(c));
  return v;
}

double cell_bound(const Barrier& barrier, const RadialGrid& grid, std::size_t cell, double t) {
  const double a = eval(barrier, grid.faces[cell], t);
  const double m = eval(barrier, grid.centers[cell], t);
  const double b = eval(barrier, grid.faces[cell + 1], t);
  return is_supersolution(barrier) ? std::max({a, m, b}) : std::min({a, m, b});
}

Check support_inclusion_check(const RunResult& run, const Barrier& barrier, const RadialGrid& grid, double t_cut) {
  if (std::holds_alternative<GE1Barrier>(barrier)) {
    throw InvalidParameter("support inclusion applies to GE2 and Blowup barriers only");
  }
  const bool upper = is_supersolution(barrier);
  Check c;
  c.name = "support_inclusion";
  c.worst = -std::numeric_limits<double>::infinity();
  std::size_t n = 0;
  for (const auto& s : run.series) {
    if (s.t > t_cut) break;
    const double closed = closed_support(barrier, s.t);
    const double v = upper ? s.support_radius - (closed + grid.dr) : (closed - grid.dr) - s.support_radius;
    if (v > c.worst) {
      c.worst = v;
      c.r = s.support_radius;
      c.t = s.t;
    }
    ++n;
  }
  c.pass = n > 0 && c.worst <= 0.0;
  c.detail = std::to_string(n) + " series points";
  return c;
}

Check barrier_comparison(const RunResult& run, const Barrier& barrier, const RadialGrid& grid, double t_cut) {
  Check c;
  c.name = is_supersolution(barrier) ? "solution_below_barrier" : "solution_above_barrier";
  c.worst = -std::numeric_limits<double>::infinity();
  std::size_t n = 0;
  for (const auto& snap : run.snapshots) {
    if (snap.t > t_cut) break;
    const StateCompare sc = compare_state(snap.u, barrier, grid, snap.t);
    if (sc.worst > c.worst) {
      c.worst = sc.worst;
      c.r = sc.r;
      c.t = snap.t;
    }
    ++n;
  }
  c.pass = n > 0 && c.worst <= 0.0;
  c.detail = std::to_string(n) + " snapshots";
  return c;
}

ComparisonOutcome comparison_experiment(const Scenario& s) {
  PreparedScenario prep = prepare(s);
  ComparisonOutcome out;
  out.report = prep.report;
  out.params = prep.params;
  out.R = prep.grid.R;
  Verdict& v = out.verdict;

  {
    Check c;
    c.name = "feasibility";
    c.pass = prep.report.overall;
    for (const auto& f : prep.report.failures()) c.detail += (c.detail.empty() ? "" : ", ") + f;
    v.add(std::move(c));
  }
  {
    const StateCompare sc = compare_state(prep.u0.u, prep.barrier, prep.grid, 0.0);
    Check c;
    c.name = "initial_hypothesis";
    c.worst = sc.worst;
    c.r = sc.r;
    c.pass = sc.worst <= 0.0;
    v.add(std::move(c));
  }

  const double T = prep.params.T;
  const RadialSolver solver(prep.grid, prep.rho, s.constants, prep.solver);

  if (s.regime != Regime::Blowup) {
    out.run = solver.run(prep.u0);
    if (out.run.reason == Termination::StepLimit) v.inconclusive = true;
    Check g;
    g.name = "global_existence";
    g.pass = out.run.reason == Termination::Completed;
    g.t = out.run.final_state.t;
    g.worst = out.run.series.empty() ? 0.0 : out.run.series.back().sup_norm;
    g.detail = std::string(to_string(out.run.reason));
    v.add(std::move(g));
    v.add(barrier_comparison(out.run, prep.barrier, prep.grid));
    if (s.regime == Regime::GE2) v.add(support_inclusion_check(out.run, prep.barrier, prep.grid));
    if (v.inconclusive) v.overall = false;
    return out;
  }

  // Blow-up: locate S_num, then rerun with outputs on [0, 0.95 S_num].
  SolverConfig probe_cfg = prep.solver;
  probe_cfg.output_times = {probe_cfg.t_end};
  const RunResult probe = RadialSolver(prep.grid, prep.rho, s.constants, probe_cfg).run(prep.u0);
  Check declared;
  declared.name = "blowup_declared";
  declared.pass = probe.blowup.has_value();
  declared.detail = std::string(to_string(probe.reason));
  if (probe.reason == Termination::StepLimit) v.inconclusive = true;
  if (!probe.blowup) {
    v.add(std::move(declared));
    out.run = probe;
    v.overall = false;
    return out;
  }
  const double S = probe.blowup->S_num;
  declared.t = S;
  declared.worst = S;
  v.add(std::move(declared));

  Check upper_t;
  upper_t.name = "blowup_time_upper";
  upper_t.worst = S - 1.05 * T;
  upper_t.t = S;
  upper_t.pass = upper_t.worst <= 0.0;
  v.add(std::move(upper_t));
  Check lower_t;
  lower_t.name = "blowup_time_lower";
  lower_t.worst = 0.95 * probe.tau0 - S;
  lower_t.t = S;
  lower_t.pass = lower_t.worst <= 0.0;
  v.add(std::move(lower_t));

  const double t_cut = 0.95 * S;
  SolverConfig cfg = prep.solver;
  cfg.t_end = t_cut;
  cfg.output_times = linspace(0.0, t_cut, s.output_count);
  out.run = RadialSolver(prep.grid, prep.rho, s.constants, cfg).run(prep.u0);
  v.add(barrier_comparison(out.run, prep.barrier, prep.grid, t_cut));
  v.add(support_inclusion_check(out.run, prep.barrier, prep.grid, t_cut));
  out.run.blowup = probe.blowup;
  out.run.reason = probe.reason;
  out.run.steps = probe.steps;
  if (v.inconclusive) v.overall = false;
  return out;
}

Verdict derivative_crosscheck(const Barrier& barrier, std::size_t samples, std::uint64_t seed) {
  using LD = long double;
  const LD h = 1e-5L;
  const double hd = 1e-5;
  const double m = barrier_constants(barrier).m;
  const double T = horizon_T(barrier);
  const bool blowup = std::holds_alternative<BlowupSubsolution>(barrier);
  const bool ge1 = std::holds_alternative<GE1Barrier>(barrier);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  const auto w = [&](LD r, LD t) { return eval_as<LD>(barrier, r, t); };
  const auto wm = [&](LD r, LD t) { return std::pow(w(r, t), static_cast<LD>(m)); };

  Check ct{"w_t", true, 0.0, 0.0, 0.0, ""};
  Check cr{"wm_r", true, 0.0, 0.0, 0.0, ""};
  Check crr{"wm_rr", true, 0.0, 0.0, 0.0, ""};
  const auto note = [](Check& c, double err, double r, double t) {
    if (err > c.worst) {
      c.worst = err;
      c.r = r;
      c.t = t;
    }
  };

  std::size_t taken = 0;
  std::size_t attempts = 0;
  while (taken < samples && attempts < 100 * samples) {
    ++attempts;
    double r, t;
    if (ge1) {
      t = 10 * hd + U(rng) * 10.0 * T;
      r = std::exp(std::log(1e-3) + U(rng) * (std::log(1e3) - std::log(1e-3)));
    } else {
      t = blowup ? 10 * hd + U(rng) * 0.9 * T : 10 * hd + U(rng) * 10.0 * T;
      const SupportRadius lo = support_radius(barrier, t - hd);
      const SupportRadius hi = support_radius(barrier, t + hd);
      if (lo.kind != SupportRadius::Kind::Finite || hi.kind != SupportRadius::Kind::Finite) continue;
      const double rmax = 0.999 * std::min(lo.radius, hi.radius);
      if (blowup && taken % 10 == 0) r = 10 * hd + U(rng) * std::min(0.1, rmax);
      else r = 10 * hd + U(rng) * rmax;
      if (r >= rmax) continue;
      if (blowup && std::abs(r - kE) < 1e-3) continue;
    }
    ++taken;
    const Derivatives d = eval_derivatives(barrier, r, t);
    const LD R = r;
    const LD Tt = t;
    const LD w0 = w(R, Tt);
    const LD m0 = wm(R, Tt);
    // Radial step relative to the radius so the second difference stays above roundoff at large r.
    const LD hr = h * std::max(R, 1.0L);
    const LD mp = wm(R + hr, Tt);
    const LD mm = wm(R - hr, Tt);
    const LD fd_t = (w(R, Tt + h) - w(R, Tt - h)) / (2 * h);
    const LD fd_r = (mp - mm) / (2 * hr);
    const LD fd_rr = (mp - 2 * m0 + mm) / (hr * hr);

    const double Lr = ge1 || std::holds_alternative<GE2Barrier>(barrier) ? r + std::visit([](const auto& b) {
      if constexpr (requires { b.params().r0; }) return b.params().r0;
      else return 1.0;
    }, barrier) : std::max(r, 1.0);
    const double tscale = blowup ? T - t : T + t;
    const double floor_t = static_cast<double>(std::abs(w0)) / tscale;
    const double floor_r = static_cast<double>(std::abs(m0)) / Lr;
    const double floor_rr = floor_r / Lr;
    const auto rel = [](double a, LD fd, double floor) {
      const double den = std::max({std::abs(a), floor, std::numeric_limits<double>::min()});
      return static_cast<double>(std::abs(static_cast<LD>(a) - fd)) / den;
    };
    note(ct, rel(d.w_t, fd_t, floor_t), r, t);
    note(cr, rel(d.wm_r, fd_r, floor_r), r, t);
    note(crr, rel(d.wm_rr, fd_rr, floor_rr), r, t);
  }

  Verdict v;
  for (Check* c : {&ct, &cr, &crr}) {
    c->pass = taken == samples && c->worst <= 1e-6;
    c->detail = std::to_string(taken) + " samples, max relative error";
    v.add(std::move(*c));
  }
  return v;
}

Check flux_matching_check(const BlowupSubsolution& barrier, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Check c;
  c.name = "flux_matching";
  c.worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = barrier.params().T * U(rng);
    const FluxMatch f = flux_match(barrier, t);
    const double scale = std::max(std::abs(f.closed), std::numeric_limits<double>::min());
    const double err = std::max(std::abs(f.left - f.closed), std::abs(f.right - f.closed)) / scale;
    if (err > c.worst || std::isnan(err)) {
      c.worst = err;
      c.r = kE;
      c.t = t;
    }
  }
  c.pass = c.worst <= 1e-12;
  c.detail = std::to_string(samples) + " times, max relative error";
  return c;
}

ScanOutcome blow_up_scan(const Scenario& s, std::span<const double> factors, unsigned workers) {
  PreparedScenario prep = prepare(s);
  SolverConfig cfg = prep.solver;
  cfg.output_times = {cfg.t_end};
  const RadialSolver solver(prep.grid, prep.rho, s.constants, cfg);

  ScanOutcome out;
  out.entries.resize(factors.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t k = next++; k < factors.size(); k = next++) {
      State u0 = prep.u0;
      for (double& x : u0.u) x *= factors[k];
      ScanEntry e;
      e.factor = factors[k];
      e.sup0 = *std::max_element(u0.u.begin(), u0.u.end());
      e.tau0 = tau0(u0.u, s.constants.p);
      const RunResult r = solver.run(std::move(u0));
      e.blowup = r.blowup.has_value();
      e.S_num = r.blowup ? r.blowup->S_num : 0.0;
      e.reason = r.reason;
      out.entries[k] = e;
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(factors.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  Check lower{"blowup_time_lower", true, -std::numeric_limits<double>::infinity(), 0.0, 0.0, ""};
  for (const auto& e : out.entries) {
    if (!e.blowup) continue;
    const double v = 0.95 * e.tau0 - e.S_num;
    if (v > lower.worst) {
      lower.worst = v;
      lower.t = e.S_num;
      lower.r = e.factor;
    }
    lower.pass = lower.pass && v <= 0.0;
  }
  lower.detail = "r holds the scale factor";
  out.verdict.add(std::move(lower));

  if (s.regime == Regime::Blowup) {
    Check upper{"blowup_above_subsolution", true, -std::numeric_limits<double>::infinity(), 0.0, 0.0, ""};
    for (const auto& e : out.entries) {
      if (e.factor < 1.0) continue;
      const double v = e.blowup ? e.S_num - 1.05 * prep.params.T : std::numeric_limits<double>::infinity();
      if (v > upper.worst) {
        upper.worst = v;
        upper.t = e.S_num;
        upper.r = e.factor;
      }
      upper.pass = upper.pass && v <= 0.0;
    }
    upper.detail = "factors >= 1 must blow up by 1.05 T; r holds the scale factor";
    out.verdict.add(std::move(upper));
  }
  for (const auto& e : out.entries) {
    if (e.reason == Termination::StepLimit) out.verdict.inconclusive = true;
  }
  if (out.verdict.inconclusive) out.verdict.overall = false;
  return out;
}

}  // namespace pmr
