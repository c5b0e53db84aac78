#include <doctest.h>

#include <cmath>

#include "pmereact/errors.hpp"
#include "pmereact/feasibility.hpp"

using namespace pmr;

namespace {

const ProblemConstants kM2P3{2.0, 3.0, 3};
const ProblemConstants kM3P2{3.0, 2.0, 3};

Density h1_unit(double r0 = 8.0) {
  DensityParams d;
  d.family = DensityFamily::H1;
  d.k = 1.0;
  d.k0 = 1.0;
  d.alpha = 2.0;
  d.r0 = r0;
  return Density(d);
}

Density h2_blowup() {
  DensityParams d;
  d.family = DensityFamily::H2;
  d.k1 = 0.09;
  d.k2 = 1.0;
  d.rho2 = 1.0;
  d.alpha = 2.0;
  return Density(d);
}

Density h2s_unit(double r0 = kE * kE) {
  DensityParams d;
  d.family = DensityFamily::H2Smooth;
  d.k1 = 1.0;
  d.k2 = 1.0;
  d.alpha = 2.0;
  d.r0 = r0;
  return Density(d);
}

bool passes(const FeasibilityReport& r, const char* name) { return r.find(name)->pass; }

}  // namespace

TEST_CASE("K constant") {
  CHECK(K_const(kM2P3) == doctest::Approx(std::pow(1.0 / 3.0, 0.5) - std::pow(1.0 / 3.0, 1.5)).epsilon(1e-14));
  CHECK(std::abs(K_const(kM2P3) - 0.384900) <= 1e-6);
  CHECK(K_const({2.0, 2.0, 3}) == doctest::Approx(0.25).epsilon(1e-14));
  for (double m : {1.1, 2.0, 5.0}) {
    for (double p : {1.05, 1.5, 3.0, 9.0}) CHECK(K_const({m, p, 3}) > 0.0);
  }
}

TEST_CASE("GE1 amplitude threshold for p < m") {
  const Density dens = h1_unit();
  // cbar = (log 8)^(-b p/m); threshold C^(m-p) >= cbar/(k0 b (N-2-eps(b+1)))
  const double cbar = std::pow(std::log(8.0), -0.5 * 2.0 / 3.0);
  const double threshold = cbar / (1.0 * 0.5 * (1.0 - 0.5 * 1.5));
  CHECK(cbar == doctest::Approx(0.78343).epsilon(1e-4));
  CHECK(threshold == doctest::Approx(6.2674).epsilon(1e-4));

  GE1Barrier::Params P{6.27, 0.25, 2.0, 0.5, 0.5, 8.0};
  const FeasibilityReport pass = check_ge1(kM3P2, dens, P);
  CHECK(pass.overall);
  CHECK(pass.derived.at("cbar") == doctest::Approx(cbar).epsilon(1e-14));
  CHECK(pass.derived.at("C_threshold_min") == doctest::Approx(threshold).epsilon(1e-12));
  P.C = 6.26;
  const FeasibilityReport fail = check_ge1(kM3P2, dens, P);
  CHECK_FALSE(fail.overall);
  CHECK_FALSE(passes(fail, "amplitude_balance"));
  for (const auto& q : fail.inequalities) CHECK(q.slack == doctest::Approx(q.rhs - q.lhs));
}

TEST_CASE("GE1 structural conditions") {
  const Density dens = h1_unit();
  GE1Barrier::Params P{10.0, 0.25, 2.0, 1.0, 0.5, 8.0};  // b = alpha - 1
  CHECK_FALSE(passes(check_ge1(kM3P2, dens, P), "b_below_alpha_minus_1"));
  P = {10.0, 0.25, 0.5, 0.5, 0.5, 8.0};
  CHECK_FALSE(passes(check_ge1(kM3P2, dens, P), "T_above_1"));
  P = {10.0, 0.25, 2.0, 0.5, 0.4, 8.0};  // eps below 1/log 8
  CHECK_FALSE(passes(check_ge1(kM3P2, dens, P), "eps_above_inverse_log_r0"));
}

TEST_CASE("GE1 with p > m passes for small C") {
  const Density dens = h1_unit();
  GE1Barrier::Params P{1.0, 0.0, 1.0, 0.5, 0.5, 8.0};
  bool seen = false;
  for (double C = 1.0; C > 1e-8; C /= 10.0) {
    P.C = C;
    const bool ok = check_ge1(kM2P3, dens, P).overall;
    if (seen) CHECK(ok);
    seen = seen || ok;
  }
  CHECK(seen);
}

TEST_CASE("GE1 requires an H1 density") {
  CHECK_THROWS_AS(check_ge1(kM3P2, h2s_unit(), {}), UnsupportedFamily);
}

TEST_CASE("GE2 omega cap and density ratio") {
  const Density dens = h2s_unit();
  const double omega_star = 0.5 / (2.0 * 16.0);
  CHECK(omega_star == doctest::Approx(1.0 / 64.0));
  const double C = 0.1;
  FeasibilityReport r = check_ge2(kM2P3, dens, {C, C / (omega_star * (1 - 1e-12)), 1.0, kE * kE});
  CHECK(passes(r, "omega_cap"));
  CHECK(passes(r, "density_ratio"));
  CHECK(r.find("density_ratio")->lhs == 1.0);
  CHECK(r.find("density_ratio")->rhs == 2.0);
  r = check_ge2(kM2P3, dens, {C, C / (1.0 / 32.0), 1.0, kE * kE});
  CHECK_FALSE(passes(r, "omega_cap"));
  CHECK(r.derived.at("omega_max") == doctest::Approx(omega_star).epsilon(1e-14));
}

TEST_CASE("GE2 growth balance: unit form has no feasible omega, log r0 form does") {
  const Density dens = h2s_unit();
  SearchConfig cfg;
  cfg.bound = Ge2Bound::Unit;
  CHECK_THROWS_AS(find_params(Regime::GE2, kM2P3, dens, cfg), InfeasibleWithinBudget);
  cfg.bound = Ge2Bound::LogR0;
  const SearchResult res = find_params(Regime::GE2, kM2P3, dens, cfg);
  CHECK(res.report.overall);
  REQUIRE(res.report.omega_window);
  CHECK(res.report.omega_window->second <= 1.0 / 64.0);
  // The log r0 bracket at r0 = e^2: k1 (bbar m/(m-1) - 1 + (N-2) log r0) - k2 bbar/(m-1) = 8 - 1 + 2 - 4
  CHECK(res.report.derived.at("bracket") == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("GE2 smaller C passes once the bracket exceeds 1/(p-1)") {
  const Density dens = h2s_unit();
  const double omega = 0.014;
  bool seen = false;
  for (double C = 1.0; C > 1e-4; C /= 2.0) {
    const FeasibilityReport r = check_ge2(kM2P3, dens, {C, C / omega, 1.0, kE * kE}, Ge2Bound::LogR0);
    if (seen) CHECK(r.overall);
    seen = seen || r.overall;
  }
  CHECK(seen);
}

TEST_CASE("blow-up feasibility arithmetic") {
  const Density dens = h2_blowup();
  const FeasibilityReport r = check_blowup(kM2P3, dens, {218.0, 218.0, 1.0});
  const double outer = 1.0 + 2.0 * 3.0 * 1.0 * (1.0 + 6.0);
  const double inner = 1.0 + 2.0 * 3.0 * (3.0 / (kE * kE));
  const double K = std::pow(1.0 / 3.0, 0.5) - std::pow(1.0 / 3.0, 1.5);
  const double concavity = K * std::pow(outer, 1.5) / 0.5;
  CHECK(outer == 43.0);
  CHECK(r.derived.at("branch_outer") == doctest::Approx(outer).epsilon(1e-12));
  CHECK(r.derived.at("branch_inner") == doctest::Approx(inner).epsilon(1e-12));
  CHECK(r.derived.at("branch_inner") == doctest::Approx(3.4360).epsilon(1e-4));
  CHECK(r.derived.at("C_threshold_peak") == doctest::Approx(std::sqrt(43.0 / 3.0)).epsilon(1e-12));
  CHECK(r.derived.at("C_threshold_concavity") == doctest::Approx(concavity).epsilon(1e-12));
  CHECK(r.derived.at("C_threshold_concavity") == doctest::Approx(217.06).epsilon(1e-4));
  CHECK(r.omega == 1.0);
  CHECK(r.overall);
  CHECK_FALSE(check_blowup(kM2P3, dens, {217.0, 217.0, 1.0}).overall);
}

TEST_CASE("blow-up feasibility is monotone in C at fixed omega") {
  const Density dens = h2_blowup();
  for (double omega : {0.1, 0.5, 1.0}) {
    bool seen = false;
    for (double C = 1.0; C < 1e5; C *= 1.3) {
      const bool ok = check_blowup(kM2P3, dens, {C, C / omega, 1.0}).overall;
      if (seen) REQUIRE(ok);
      seen = seen || ok;
    }
    CHECK(seen);
  }
}

TEST_CASE("find_params results re-pass their checks") {
  SUBCASE("blow-up") {
    const Density dens = h2_blowup();
    const SearchResult res = find_params(Regime::Blowup, kM2P3, dens);
    CHECK(res.report.overall);
    CHECK(res.params.C >= 217.06 * 1.01);
    CHECK(check_regime_params(Regime::Blowup, kM2P3, dens, res.params).overall);
  }
  SUBCASE("GE1 p < m") {
    const Density dens = h1_unit();
    SearchConfig cfg;
    cfg.b = 0.5;
    cfg.eps = 0.5;
    const SearchResult res = find_params(Regime::GE1a, kM3P2, dens, cfg);
    CHECK(res.report.overall);
    CHECK(res.params.C >= 6.2674 * 1.01);
    CHECK(res.params.T > 1.0);
  }
  SUBCASE("GE1 p > m") {
    const Density dens = h1_unit();
    const SearchResult res = find_params(Regime::GE1b, kM2P3, dens);
    CHECK(res.report.overall);
    CHECK(check_regime_params(Regime::GE1b, kM2P3, dens, res.params).overall);
  }
}

TEST_CASE("regime preconditions") {
  CHECK_THROWS_AS(find_params(Regime::Blowup, kM3P2, h2_blowup()), UnsupportedRegime);
  CHECK_THROWS_AS(check_regime(Regime::GE1a, kM2P3), UnsupportedRegime);
  CHECK_NOTHROW(check_regime(Regime::GE1b, kM2P3));
  for (Regime g : {Regime::GE1a, Regime::GE1b, Regime::GE2, Regime::Blowup}) CHECK(parse_regime(to_string(g)) == g);
}

TEST_CASE("proposition-level conditions hold whenever the remark-level check passes") {
  const Density blow = h2_blowup();
  const SearchResult b = find_params(Regime::Blowup, kM2P3, blow);
  for (const auto& q : proposition_checks(make_barrier(Regime::Blowup, kM2P3, blow, b.params), blow)) {
    CHECK_MESSAGE(q.pass, q.name);
  }

  const Density h2s = h2s_unit();
  SearchConfig cfg;
  cfg.bound = Ge2Bound::LogR0;
  const SearchResult g = find_params(Regime::GE2, kM2P3, h2s, cfg);
  for (const auto& q : proposition_checks(make_barrier(Regime::GE2, kM2P3, h2s, g.params), h2s, Ge2Bound::LogR0)) {
    CHECK_MESSAGE(q.pass, q.name);
  }

  const Density h1 = h1_unit();
  for (Regime reg : {Regime::GE1a, Regime::GE1b}) {
    const ProblemConstants& c = reg == Regime::GE1a ? kM3P2 : kM2P3;
    const SearchResult e = find_params(reg, c, h1);
    for (const auto& q : proposition_checks(make_barrier(reg, c, h1, e.params), h1)) CHECK_MESSAGE(q.pass, q.name);
  }
}
