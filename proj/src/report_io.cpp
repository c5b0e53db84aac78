#include "pmereact/report_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "pmereact/errors.hpp"

namespace pmr {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

Json jnum(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

Json to_json(const BarrierParams& params, Regime regime) {
  Json j;
  j["regime"] = std::string(to_string(regime));
  j["C"] = jnum(params.C);
  if (regime == Regime::GE2 || regime == Regime::Blowup) {
    j["a"] = jnum(params.a);
  } else {
    j["beta"] = jnum(params.beta);
    j["b"] = jnum(params.b);
    j["eps"] = jnum(params.eps);
  }
  j["T"] = jnum(params.T);
  j["r0"] = jnum(params.r0);
  return j;
}

Json to_json(const FeasibilityReport& report) {
  Json j;
  j["mode"] = std::string(to_string(report.mode));
  j["overall"] = report.overall;
  j["params"] = to_json(report.params, report.mode);
  if (report.mode == Regime::GE2 || report.mode == Regime::Blowup) j["omega"] = jnum(report.omega);
  if (report.omega_window) j["omega_window"] = {jnum(report.omega_window->first), jnum(report.omega_window->second)};
  Json list = Json::array();
  for (const auto& q : report.inequalities) {
    Json e;
    e["name"] = q.name;
    e["lhs"] = jnum(q.lhs);
    e["rhs"] = jnum(q.rhs);
    e["slack"] = jnum(q.slack);
    e["pass"] = q.pass;
    if (q.strict) e["strict"] = true;
    if (q.t) e["t"] = jnum(*q.t);
    list.push_back(std::move(e));
  }
  j["inequalities"] = std::move(list);
  Json derived = Json::object();
  for (const auto& [k, v] : report.derived) derived[k] = jnum(v);
  j["derived"] = std::move(derived);
  return j;
}

Json to_json(const Verdict& verdict) {
  Json j;
  j["overall"] = verdict.overall;
  j["inconclusive"] = verdict.inconclusive;
  Json list = Json::array();
  for (const auto& c : verdict.checks) {
    Json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["worst"] = jnum(c.worst);
    e["r"] = jnum(c.r);
    e["t"] = jnum(c.t);
    if (!c.detail.empty()) e["detail"] = c.detail;
    list.push_back(std::move(e));
  }
  j["checks"] = std::move(list);
  return j;
}

Json run_summary(const RunResult& run) {
  Json j;
  j["blowup"] = run.blowup.has_value();
  j["S_num"] = run.blowup ? jnum(run.blowup->S_num) : Json(nullptr);
  j["last_sup"] = run.blowup ? jnum(run.blowup->last_sup) : Json(nullptr);
  j["tau0"] = jnum(run.tau0);
  j["termination"] = std::string(to_string(run.reason));
  j["t_final"] = jnum(run.final_state.t);
  j["steps"] = run.steps;
  j["clamp_total"] = jnum(run.clamp_total);
  return j;
}

Json config_echo(const ScenarioConfig& config) {
  Json j;
  j["search"] = config.search;
  j["defaults"] = config.defaults;
  return j;
}

void write_series_csv(const std::filesystem::path& path, const RunResult& run) {
  auto out = open(path);
  out << "t,sup_norm,support_radius\n";
  for (const auto& s : run.series) out << num(s.t) << ',' << num(s.sup_norm) << ',' << num(s.support_radius) << '\n';
  finish(out, path);
}

void write_comparison_csv(const std::filesystem::path& path, const RunResult& run, const Barrier& barrier,
                          const RadialGrid& grid) {
  const bool upper = is_supersolution(barrier);
  const bool ge1 = std::holds_alternative<GE1Barrier>(barrier);
  auto out = open(path);
  out << "t,sup_norm,support_radius,barrier_sup,barrier_support_radius,worst_violation\n";
  std::size_t k = 0;
  for (const auto& s : run.series) {
    out << num(s.t) << ',' << num(s.sup_norm) << ',' << num(s.support_radius) << ',';
    double bsup;
    double brad;
    try {
      const auto* sub = std::get_if<BlowupSubsolution>(&barrier);
      bsup = sub ? sub->sup_norm(s.t) : eval(barrier, 0.0, s.t);
      brad = ge1 ? std::numeric_limits<double>::infinity() : support_radius(barrier, s.t).radius;
    } catch (const OutOfDomain&) {
      bsup = brad = std::numeric_limits<double>::quiet_NaN();
    }
    out << num(bsup) << ',' << num(brad) << ',';
    while (k < run.snapshots.size() && run.snapshots[k].t < s.t) ++k;
    if (k < run.snapshots.size() && run.snapshots[k].t == s.t && std::isfinite(bsup)) {
      double worst = -std::numeric_limits<double>::infinity();
      const auto& u = run.snapshots[k].u;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double bound = cell_bound(barrier, grid, i, s.t);
        const double tol = 1e-8 + 1e-3 * std::abs(bound);
        worst = std::max(worst, upper ? u[i] - bound - tol : bound - u[i] - tol);
      }
      out << num(worst);
    }
    out << '\n';
  }
  finish(out, path);
}

void write_snapshots_csv(const std::filesystem::path& path, const RunResult& run, const RadialGrid& grid) {
  auto out = open(path);
  out << "t,r,u\n";
  for (const auto& snap : run.snapshots) {
    const std::string t = num(snap.t);
    for (std::size_t i = 0; i < snap.u.size(); ++i) out << t << ',' << num(grid.centers[i]) << ',' << num(snap.u[i]) << '\n';
  }
  finish(out, path);
}

void write_scan_csv(const std::filesystem::path& path, const ScanOutcome& scan) {
  auto out = open(path);
  out << "factor,sup0,tau0,blowup,S_num,termination\n";
  for (const auto& e : scan.entries) {
    out << num(e.factor) << ',' << num(e.sup0) << ',' << num(e.tau0) << ',' << (e.blowup ? 1 : 0) << ','
        << (e.blowup ? num(e.S_num) : std::string()) << ',' << to_string(e.reason) << '\n';
  }
  finish(out, path);
}

void write_json(const std::filesystem::path& path, const Json& json) {
  auto out = open(path);
  out << json.dump(2) << '\n';
  finish(out, path);
}

}  // namespace pmr
