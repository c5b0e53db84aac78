#include "pmereact/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pmereact/errors.hpp"

namespace pmr {

namespace {

bool margin_ok(const Inequality& q, double margin) { return q.pass && q.slack >= margin * std::abs(q.lhs); }

bool all_pass(const std::vector<Inequality>& list) {
  return std::all_of(list.begin(), list.end(), [](const Inequality& q) { return q.pass; });
}

void require_p_ne_m(const ProblemConstants& c) {
  if (c.p == c.m) throw UnsupportedRegime("p = m is not covered by any barrier construction");
}

void require_p_gt_m(const ProblemConstants& c, std::string_view what) {
  if (!(c.p > c.m)) throw UnsupportedRegime(std::string(what) + " requires p > m");
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = n == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = std::exp(std::log(lo) + s * (std::log(hi) - std::log(lo)));
  }
  return out;
}

// Boundary of a monotone predicate in log C. `good_high`: true for large C.
std::optional<double> bisect_C(const SearchConfig& cfg, bool good_high, const auto& pred) {
  const bool at_lo = pred(cfg.C_min);
  const bool at_hi = pred(cfg.C_max);
  if (good_high) {
    if (at_lo) return cfg.C_min;
    if (!at_hi) return std::nullopt;
  } else {
    if (at_hi) return cfg.C_max;
    if (!at_lo) return std::nullopt;
  }
  double lo = std::log(cfg.C_min);
  double hi = std::log(cfg.C_max);
  for (int i = 0; i < cfg.bisection_steps && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const bool ok = pred(std::exp(mid));
    if (ok == good_high) hi = mid;
    else lo = mid;
  }
  return std::exp(good_high ? hi : lo);
}

std::string join_failures(const FeasibilityReport& r) {
  std::string out;
  for (const auto& f : r.failures()) out += (out.empty() ? "" : ", ") + f;
  return out;
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::GE1a: return "GE1a";
    case Regime::GE1b: return "GE1b";
    case Regime::GE2: return "GE2";
    case Regime::Blowup: return "Blowup";
  }
  return "?";
}

Regime parse_regime(std::string_view name) {
  if (name == "GE1a" || name == "ge1a") return Regime::GE1a;
  if (name == "GE1b" || name == "ge1b") return Regime::GE1b;
  if (name == "GE2" || name == "ge2") return Regime::GE2;
  if (name == "Blowup" || name == "blowup") return Regime::Blowup;
  throw InvalidParameter("unknown regime '" + std::string(name) + "' (expected GE1a, GE1b, GE2 or Blowup)");
}

void check_regime(Regime regime, const ProblemConstants& c) {
  switch (regime) {
    case Regime::GE1a:
      if (!(c.p < c.m)) throw UnsupportedRegime("regime GE1a requires p < m");
      break;
    case Regime::GE1b:
      if (!(c.p > c.m)) throw UnsupportedRegime("regime GE1b requires p > m");
      break;
    case Regime::GE2:
    case Regime::Blowup:
      if (!(c.p > c.m)) throw UnsupportedRegime("regime " + std::string(to_string(regime)) + " requires p > m");
      break;
  }
}

std::string_view to_string(Ge2Bound bound) { return bound == Ge2Bound::Unit ? "unit" : "log_r0"; }

Ge2Bound parse_ge2_bound(std::string_view name) {
  if (name == "unit") return Ge2Bound::Unit;
  if (name == "log_r0") return Ge2Bound::LogR0;
  throw InvalidParameter("unknown GE2 bound '" + std::string(name) + "' (expected unit or log_r0)");
}

Inequality make_inequality(std::string name, double lhs, double rhs, bool strict) {
  Inequality q;
  q.name = std::move(name);
  q.lhs = lhs;
  q.rhs = rhs;
  q.slack = rhs - lhs;
  q.strict = strict;
  q.pass = strict ? lhs < rhs : lhs <= rhs;
  return q;
}

const Inequality* FeasibilityReport::find(std::string_view name) const {
  for (const auto& q : inequalities) {
    if (q.name == name) return &q;
  }
  return nullptr;
}

std::vector<std::string> FeasibilityReport::failures() const {
  std::vector<std::string> out;
  for (const auto& q : inequalities) {
    if (!q.pass) out.push_back(q.name);
  }
  return out;
}

double K_const(const ProblemConstants& c) {
  const double x = (c.m - 1.0) / (c.p + c.m - 2.0);
  return std::pow(x, (c.m - 1.0) / (c.p - 1.0)) - std::pow(x, (c.p + c.m - 2.0) / (c.p - 1.0));
}

// ---------------------------------------------------------------- checks

FeasibilityReport check_ge1(const ProblemConstants& c, const Density& density, const GE1Barrier::Params& P) {
  c.validate();
  require_p_ne_m(c);
  if (density.family() != DensityFamily::H1) {
    throw UnsupportedFamily("GE1 feasibility requires an H1 density");
  }
  const double alpha = density.params().alpha;
  const double k0 = density.k0();
  const double r0 = P.r0;
  const double mu = c.N - 2.0 - P.eps * (P.b + 1.0);
  const double cbar = std::pow(std::log(r0), -P.b * c.p / c.m);

  FeasibilityReport r;
  r.mode = c.p < c.m ? Regime::GE1a : Regime::GE1b;
  r.params = {P.C, 0.0, P.T, P.beta, P.b, P.eps, r0};
  r.inequalities.push_back(make_inequality("b_positive", 0.0, P.b, true));
  r.inequalities.push_back(make_inequality("b_below_alpha_minus_1", P.b, alpha - 1.0, true));
  r.inequalities.push_back(make_inequality("dimension_margin", 0.0, mu, true));
  r.inequalities.push_back(make_inequality("eps_above_inverse_log_r0", 1.0 / std::log(r0), P.eps, true));
  r.inequalities.push_back(make_inequality("r0_density_match", std::abs(r0 - density.params().r0),
                                           1e-12 * density.params().r0));
  if (c.p < c.m) {
    r.inequalities.push_back(make_inequality("beta_positive", 0.0, P.beta, true));
    r.inequalities.push_back(make_inequality("T_above_1", 1.0, P.T, true));
  } else {
    r.inequalities.push_back(make_inequality("beta_zero", std::abs(P.beta), 0.0));
  }
  r.inequalities.push_back(
      make_inequality("amplitude_balance", cbar * std::pow(P.C, c.p), k0 * P.b * mu * std::pow(P.C, c.m)));

  r.derived["k0"] = k0;
  r.derived["cbar"] = cbar;
  r.derived["dimension_margin"] = mu;
  if (mu > 0.0) {
    // C^(m-p) >= cbar/(k0 b mu) for p < m, reversed for p > m.
    r.derived[c.p < c.m ? "C_threshold_min" : "C_threshold_max"] =
        std::pow(cbar / (k0 * P.b * mu), 1.0 / (c.m - c.p));
  }
  r.overall = all_pass(r.inequalities);
  return r;
}

FeasibilityReport check_ge2(const ProblemConstants& c, const Density& density, const GE2Barrier::Params& P,
                            Ge2Bound bound) {
  c.validate();
  require_p_gt_m(c, "GE2 feasibility");
  if (density.family() != DensityFamily::H2Smooth) {
    throw UnsupportedFamily("GE2 feasibility requires an H2Smooth density");
  }
  const auto& d = density.params();
  const double m = c.m;
  const double p = c.p;
  const double bb = d.alpha + 2.0;
  const double r0 = d.r0;
  const double omega = std::pow(P.C, m - 1.0) / P.a;
  const double mq = m / (m - 1.0);
  const double bracket = bound == Ge2Bound::Unit
                             ? d.k1 * (bb * mq + c.N - 3.0) - d.k2 * bb / (m - 1.0)
                             : d.k1 * (bb * mq - 1.0 + (c.N - 2.0) * std::log(r0)) - d.k2 * bb / (m - 1.0);

  FeasibilityReport r;
  r.mode = Regime::GE2;
  r.params = {P.C, P.a, P.T, 0.0, 0.0, 0.0, r0};
  r.omega = omega;
  r.inequalities.push_back(make_inequality("r0_above_e", kE, r0, true));
  r.inequalities.push_back(
      make_inequality("density_ratio", d.k2 / d.k1, m + (c.N - 3.0) * (m - 1.0) / bb, true));
  r.inequalities.push_back(make_inequality("omega_cap", bb * bb * omega * mq * d.k2, (p - m) / (p - 1.0)));
  r.inequalities.push_back(
      make_inequality("growth_balance", std::pow(P.C, p - 1.0) + 1.0 / (p - 1.0), bb * omega * mq * bracket));

  r.derived["bbar"] = bb;
  r.derived["omega"] = omega;
  r.derived["bracket"] = bracket;
  r.derived["omega_max"] = (p - m) / (p - 1.0) / (bb * bb * mq * d.k2);
  const double room = bb * omega * mq * bracket - 1.0 / (p - 1.0);
  if (room > 0.0) r.derived["C_threshold_max"] = std::pow(room, 1.0 / (p - 1.0));
  r.overall = all_pass(r.inequalities);
  return r;
}

FeasibilityReport check_blowup(const ProblemConstants& c, const Density& density,
                               const BlowupSubsolution::Params& P) {
  c.validate();
  require_p_gt_m(c, "blow-up feasibility");
  if (density.family() == DensityFamily::H1) {
    throw UnsupportedFamily("blow-up feasibility requires an H2 or H2Smooth density");
  }
  const double m = c.m;
  const double p = c.p;
  const double bu = density.params().alpha + 1.0;
  const double k2 = density.params().k2;
  const double rho2 = density.rho2();
  const double omega = std::pow(P.C, m - 1.0) / P.a;
  const double K = K_const(c);
  const double theta = (p + m - 2.0) / (p - 1.0);

  const double outer = 1.0 + m * k2 * bu * omega * (c.N - 2.0 + bu * m / (m - 1.0));
  const double inner = 1.0 + m * rho2 * omega * bu * c.N / (kE * kE);
  const double peak_rhs = (p + m - 2.0) * std::pow(P.C, p - 1.0);
  const double conc_scale = K / std::pow(m - 1.0, theta);
  const double conc_rhs = (p - m) / ((m - 1.0) * (p - 1.0)) * std::pow(P.C, m - 1.0);

  FeasibilityReport r;
  r.mode = Regime::Blowup;
  r.params = {P.C, P.a, P.T, 0.0, 0.0, 0.0, density.params().r0};
  r.omega = omega;
  r.inequalities.push_back(make_inequality("peak_outer", outer, peak_rhs));
  r.inequalities.push_back(make_inequality("peak_inner", inner, peak_rhs));
  r.inequalities.push_back(make_inequality("concavity_outer", conc_scale * std::pow(outer, theta), conc_rhs));
  r.inequalities.push_back(make_inequality("concavity_inner", conc_scale * std::pow(inner, theta), conc_rhs));

  const double branch = std::max(outer, inner);
  r.derived["K"] = K;
  r.derived["bunder"] = bu;
  r.derived["omega"] = omega;
  r.derived["rho2"] = rho2;
  r.derived["branch_outer"] = outer;
  r.derived["branch_inner"] = inner;
  r.derived["C_threshold_peak"] = std::pow(branch / (p + m - 2.0), 1.0 / (p - 1.0));
  r.derived["C_threshold_concavity"] =
      std::pow(conc_scale * std::pow(branch, theta) * (m - 1.0) * (p - 1.0) / (p - m), 1.0 / (m - 1.0));
  r.overall = all_pass(r.inequalities);
  return r;
}

FeasibilityReport check_regime_params(Regime regime, const ProblemConstants& c, const Density& density,
                                      const BarrierParams& P, Ge2Bound bound) {
  check_regime(regime, c);
  switch (regime) {
    case Regime::GE1a:
    case Regime::GE1b: return check_ge1(c, density, {P.C, P.beta, P.T, P.b, P.eps, density.params().r0});
    case Regime::GE2: return check_ge2(c, density, {P.C, P.a, P.T, density.params().r0}, bound);
    case Regime::Blowup: return check_blowup(c, density, {P.C, P.a, P.T});
  }
  throw InvalidParameter("unknown regime");
}

Barrier make_barrier(Regime regime, const ProblemConstants& c, const Density& density, const BarrierParams& P) {
  check_regime(regime, c);
  const double alpha = density.params().alpha;
  switch (regime) {
    case Regime::GE1a:
    case Regime::GE1b: return GE1Barrier(c, {P.C, P.beta, P.T, P.b, P.eps, density.params().r0});
    case Regime::GE2: return GE2Barrier(c, alpha, {P.C, P.a, P.T, density.params().r0});
    case Regime::Blowup: return BlowupSubsolution(c, alpha, {P.C, P.a, P.T});
  }
  throw InvalidParameter("unknown regime");
}

// ---------------------------------------------------------------- time-pointwise conditions

namespace {

struct WorstTracker {
  std::vector<Inequality> worst;
  std::vector<double> rel;

  void add(std::size_t slot, Inequality q, double t) {
    q.t = t;
    const double scale = std::max({std::abs(q.lhs), std::abs(q.rhs), std::numeric_limits<double>::min()});
    const double rs = q.pass ? q.slack / scale : -std::numeric_limits<double>::infinity();
    if (slot >= worst.size()) {
      worst.push_back(std::move(q));
      rel.push_back(rs);
    } else if (rs < rel[slot] || (!q.pass && worst[slot].pass)) {
      worst[slot] = std::move(q);
      rel[slot] = rs;
    }
  }
};

std::vector<double> time_samples(double t0, double t1, std::size_t n, bool open) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = open ? t0 + (t1 - t0) * static_cast<double>(k + 1) / static_cast<double>(n + 1)
                : t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(std::max<std::size_t>(n, 2) - 1);
  }
  return t;
}

}  // namespace

std::vector<Inequality> proposition_checks(const Barrier& barrier, const Density& density, Ge2Bound bound,
                                           std::size_t samples, double t_max) {
  WorstTracker w;
  const ProblemConstants& c = barrier_constants(barrier);
  const double m = c.m;
  const double p = c.p;
  const double mq = m / (m - 1.0);

  if (const auto* b = std::get_if<GE1Barrier>(&barrier)) {
    const auto& P = b->params();
    const double k0 = density.k0();
    const double mu = c.N - 2.0 - P.eps * (P.b + 1.0);
    for (double t : time_samples(0.0, t_max, samples, false)) {
      const double zeta = std::pow(P.T + t, P.beta);
      const double dzeta = P.beta == 0.0 ? 0.0 : P.beta * std::pow(P.T + t, P.beta - 1.0);
      w.add(0, make_inequality("zeta_nondecreasing", 0.0, dzeta), t);
      w.add(1,
            make_inequality("amplitude_balance_t", b->cbar() * std::pow(P.C * zeta, p),
                            k0 * P.b * mu * std::pow(P.C * zeta, m)),
            t);
    }
  } else if (const auto* b = std::get_if<GE2Barrier>(&barrier)) {
    const auto& P = b->params();
    const auto& d = density.params();
    const double bb = b->bbar();
    const double omega = std::pow(P.C, m - 1.0) / P.a;
    const double bracket = bound == Ge2Bound::Unit
                               ? (bb * mq + c.N - 3.0) * d.k1 - bb / (m - 1.0) * d.k2
                               : (bb * mq - 1.0 + (c.N - 2.0) * std::log(d.r0)) * d.k1 - bb / (m - 1.0) * d.k2;
    for (double t : time_samples(0.0, t_max, samples, false)) {
      const double tau = P.T + t;
      const double zeta = b->zeta(t);
      const double eta = b->eta(t);
      const double dzeta = -1.0 / (p - 1.0) * std::pow(tau, -p / (p - 1.0));
      const double deta = -(p - m) / (p - 1.0) * eta / tau;
      w.add(0,
            make_inequality("eta_decay", bb * bb * omega * std::pow(zeta, m - 1.0) * mq * d.k2, -deta / (eta * eta)),
            t);
      w.add(1,
            make_inequality("growth_balance_t", std::pow(P.C, p - 1.0) * std::pow(zeta, p) - dzeta,
                            bb * omega * std::pow(zeta, m) * mq * eta * bracket),
            t);
    }
  } else {
    const auto& s = std::get<BlowupSubsolution>(barrier);
    const auto& P = s.params();
    const double bu = s.bunder();
    const double omega = std::pow(P.C, m - 1.0) / P.a;
    const double K = K_const(c);
    const double theta = (p + m - 2.0) / (p - 1.0);
    const double k2 = density.params().k2;
    const double rho2 = density.rho2();
    for (double t : time_samples(0.0, P.T, samples, true)) {
      const double tau = P.T - t;
      const double zeta = s.zeta(t);
      const double eta = s.eta(t);
      const double dzeta = 1.0 / (p - 1.0) * std::pow(tau, -p / (p - 1.0));
      const double deta_over_eta = (p - m) / ((p - 1.0) * tau);
      const double base = dzeta + zeta / (m - 1.0) * deta_over_eta;
      const double sigma = base + omega * bu * std::pow(zeta, m) * mq * eta * k2 * (bu * mq + c.N - 2.0);
      const double sigma0 = base + rho2 * c.N * bu / (kE * kE) * omega * std::pow(zeta, m) * mq * eta;
      const double delta = zeta / (m - 1.0) * deta_over_eta;
      const double gamma = std::pow(P.C, p - 1.0) * std::pow(zeta, p);
      const double g_pow = std::pow(gamma, (m - 1.0) / (p - 1.0));
      w.add(0, make_inequality("sigma_positive", 0.0, sigma, true), t);
      w.add(1, make_inequality("sigma_concavity", K * std::pow(sigma, theta), delta * g_pow), t);
      w.add(2, make_inequality("sigma_peak", (m - 1.0) * sigma, (p + m - 2.0) * gamma), t);
      w.add(3, make_inequality("sigma0_positive", 0.0, sigma0, true), t);
      w.add(4, make_inequality("sigma0_concavity", K * std::pow(sigma0, theta), delta * g_pow), t);
      w.add(5, make_inequality("sigma0_peak", (m - 1.0) * sigma0, (p + m - 2.0) * gamma), t);
    }
  }
  return w.worst;
}

// ---------------------------------------------------------------- search

SearchResult find_params(Regime regime, const ProblemConstants& c, const Density& density,
                         const SearchConfig& cfg) {
  c.validate();
  check_regime(regime, c);
  if (!(cfg.margin >= 0.0)) throw InvalidParameter("search margin must be nonnegative");
  if (!(cfg.C_min > 0.0 && cfg.C_max > cfg.C_min)) throw InvalidParameter("search needs 0 < C_min < C_max");
  if (!(cfg.omega_min > 0.0 && cfg.omega_max >= cfg.omega_min) || cfg.omega_points == 0) {
    throw InvalidParameter("search needs 0 < omega_min <= omega_max and omega_points >= 1");
  }

  const double T = cfg.T.value_or(regime == Regime::GE1a ? 2.0 : 1.0);
  BarrierParams P;
  P.T = T;
  P.r0 = density.params().r0;
  SearchResult out;

  if (regime == Regime::GE1a || regime == Regime::GE1b) {
    const double alpha = density.params().alpha;
    P.b = cfg.b.value_or(0.5 * (alpha - 1.0));
    if (cfg.eps) {
      P.eps = *cfg.eps;
    } else {
      const double lo = 1.0 / std::log(P.r0);
      const double hi = (c.N - 2.0) / (P.b + 1.0);
      if (!(lo < hi)) {
        throw InfeasibleWithinBudget("no eps satisfies 1/log(r0) < eps < (N-2)/(b+1); increase r0 or lower b");
      }
      P.eps = 0.5 * (lo + hi);
    }
    P.beta = regime == Regime::GE1a ? cfg.beta.value_or(0.25) : cfg.beta.value_or(0.0);
    const bool smallest = regime == Regime::GE1a;
    auto report_at = [&](double C) {
      BarrierParams q = P;
      q.C = C;
      return check_regime_params(regime, c, density, q);
    };
    {
      // C-independent entries must hold before any bisection.
      FeasibilityReport probe = report_at(1.0);
      for (const auto& q : probe.inequalities) {
        if (q.name != "amplitude_balance" && !q.pass) {
          throw InfeasibleWithinBudget("GE1 structural condition '" + q.name + "' fails for b = " +
                                       std::to_string(P.b) + ", eps = " + std::to_string(P.eps));
        }
      }
    }
    const auto C = bisect_C(cfg, smallest, [&](double C) {
      return margin_ok(*report_at(C).find("amplitude_balance"), cfg.margin);
    });
    if (!C) throw InfeasibleWithinBudget("no C in [C_min, C_max] satisfies the amplitude balance with margin");
    P.C = *C;
  } else if (regime == Regime::GE2) {
    const double m = c.m;
    std::optional<double> best_C;
    double best_omega = 0.0;
    std::optional<std::pair<double, double>> window;
    for (double omega : log_grid(cfg.omega_min, cfg.omega_max, cfg.omega_points)) {
      auto report_at = [&](double C) {
        return check_ge2(c, density, {C, std::pow(C, m - 1.0) / omega, T, P.r0}, cfg.bound);
      };
      const auto C = bisect_C(cfg, false, [&](double C) {
        const auto r = report_at(C);
        return r.overall && margin_ok(*r.find("omega_cap"), cfg.margin) &&
               margin_ok(*r.find("growth_balance"), cfg.margin);
      });
      if (!C) continue;
      if (!window) window = std::make_pair(omega, omega);
      window->second = omega;
      if (!best_C || *C > *best_C) {
        best_C = C;
        best_omega = omega;
      }
    }
    if (!best_C) {
      throw InfeasibleWithinBudget("no omega on the search grid admits a GE2 barrier (bound '" +
                                   std::string(to_string(cfg.bound)) + "'); the omega cap and the growth balance "
                                   "are incompatible for these constants");
    }
    P.C = *best_C;
    P.a = std::pow(P.C, m - 1.0) / best_omega;
    out.report.omega_window = window;
  } else {
    const double m = c.m;
    std::optional<double> chosen_C;
    double chosen_omega = 0.0;
    std::optional<std::pair<double, double>> window;
    for (double omega : log_grid(cfg.omega_min, cfg.omega_max, cfg.omega_points)) {
      const auto C = bisect_C(cfg, true, [&](double C) {
        const auto r = check_blowup(c, density, {C, std::pow(C, m - 1.0) / omega, T});
        return std::all_of(r.inequalities.begin(), r.inequalities.end(),
                           [&](const Inequality& q) { return margin_ok(q, cfg.margin); });
      });
      if (!C) continue;
      if (!window) window = std::make_pair(omega, omega);
      window->second = omega;
      chosen_C = C;
      chosen_omega = omega;
    }
    if (!chosen_C) throw InfeasibleWithinBudget("no omega on the search grid admits a blow-up subsolution with C <= C_max");
    P.C = *chosen_C;
    P.a = std::pow(P.C, m - 1.0) / chosen_omega;
    out.report.omega_window = window;
  }

  const auto window = out.report.omega_window;
  out.report = check_regime_params(regime, c, density, P, cfg.bound);
  out.report.omega_window = window;
  if (!out.report.overall) {
    throw InfeasibleWithinBudget("search result failed its own re-check: " + join_failures(out.report));
  }
  out.params = P;
  return out;
}

}  // namespace pmr
