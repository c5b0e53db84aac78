#include <doctest.h>

#include <cmath>

#include "pmereact/errors.hpp"
#include "pmereact/harness.hpp"

using namespace pmr;

namespace {

Scenario ge2_scenario() {
  Scenario s;
  s.constants = {2.0, 3.0, 3};
  s.density.family = DensityFamily::H2Smooth;
  s.density.k1 = 1.0;
  s.density.k2 = 1.0;
  s.density.alpha = 2.0;
  s.density.r0 = kE * kE;
  s.regime = Regime::GE2;
  s.search.bound = Ge2Bound::LogR0;
  s.cells = 512;
  s.output_count = 40;
  return s;
}

Scenario blowup_scenario() {
  Scenario s;
  s.constants = {2.0, 3.0, 3};
  s.density.family = DensityFamily::H2;
  s.density.k1 = 0.09;
  s.density.k2 = 1.0;
  s.density.rho2 = 1.0;
  s.density.alpha = 2.0;
  s.regime = Regime::Blowup;
  s.cells = 256;
  s.output_count = 40;
  return s;
}

Scenario ge1_scenario(Regime regime) {
  Scenario s;
  s.constants = regime == Regime::GE1a ? ProblemConstants{3.0, 2.0, 3} : ProblemConstants{2.0, 3.0, 3};
  s.density.family = DensityFamily::H1;
  s.density.k = regime == Regime::GE1a ? 1e4 : 0.1;
  s.density.alpha = 2.0;
  s.density.r0 = 8.0;
  s.regime = regime;
  s.R = 1.0;
  s.cells = 32;
  s.output_count = 20;
  return s;
}

}  // namespace

TEST_CASE("residual sweeps pass for searched parameters") {
  for (const Scenario& s : {ge1_scenario(Regime::GE1a), ge1_scenario(Regime::GE1b), ge2_scenario(), blowup_scenario()}) {
    const PreparedScenario p = prepare(s);
    const auto pts = sweep_points(p.barrier, 200, 50);
    CHECK(pts.size() >= 9000);
    const Verdict v = residual_sweep(p.barrier, p.density.as_function(), pts, &p.report);
    CHECK_MESSAGE(v.overall, to_string(s.regime));
  }
}

TEST_CASE("blow-up residual holds on both pieces") {
  const PreparedScenario p = prepare(blowup_scenario());
  std::vector<std::pair<double, double>> inner;
  std::vector<std::pair<double, double>> outer;
  for (const auto& pt : sweep_points(p.barrier, 200, 50)) (pt.first < kE ? inner : outer).push_back(pt);
  CHECK(inner.size() > 100);
  CHECK(outer.size() > 100);
  CHECK(residual_sweep(p.barrier, p.density.as_function(), inner).overall);
  CHECK(residual_sweep(p.barrier, p.density.as_function(), outer).overall);
}

TEST_CASE("residual sweep refuses infeasible parameters") {
  Scenario s = blowup_scenario();
  s.barrier = BarrierParams{10.0, 10.0, 1.0};
  const PreparedScenario p = prepare(s);
  CHECK_FALSE(p.report.overall);
  const auto pts = sweep_points(p.barrier, 10, 5);
  CHECK_THROWS_AS(residual_sweep(p.barrier, p.density.as_function(), pts, &p.report), InfeasibleBarrier);
}

TEST_CASE("residual sweep over a zero region") {
  const PreparedScenario p = prepare(ge2_scenario());
  const double r = 3.0 * p.grid.R;
  const std::vector<std::pair<double, double>> pts{{r, 0.5}, {r + 1.0, 1.0}};
  const Verdict v = residual_sweep(p.barrier, p.density.as_function(), pts);
  CHECK(v.overall);
  CHECK(v.checks[0].worst <= 0.0);
}

TEST_CASE("derivative cross-check for every family") {
  for (const Scenario& s : {ge1_scenario(Regime::GE1a), ge1_scenario(Regime::GE1b), ge2_scenario(), blowup_scenario()}) {
    const PreparedScenario p = prepare(s);
    const Verdict v = derivative_crosscheck(p.barrier, 1000, 11);
    CHECK_MESSAGE(v.overall, to_string(s.regime));
    const Verdict again = derivative_crosscheck(p.barrier, 1000, 11);
    for (std::size_t k = 0; k < v.checks.size(); ++k) CHECK(v.checks[k].worst == again.checks[k].worst);
  }
}

TEST_CASE("GE2 comparison with scaled data") {
  Scenario s = ge2_scenario();
  s.initial.kind = InitialData::Scaled;
  s.initial.factor = 0.9;
  const ComparisonOutcome out = comparison_experiment(s);
  CHECK(out.verdict.overall);
  CHECK_FALSE(out.verdict.inconclusive);
  CHECK(out.run.reason == Termination::Completed);
  CHECK(out.run.final_state.t == doctest::Approx(10.0 * out.params.T));
  REQUIRE(out.verdict.find("support_inclusion"));
  CHECK(out.verdict.find("support_inclusion")->pass);
}

TEST_CASE("zero data is below every supersolution") {
  Scenario s = ge2_scenario();
  s.initial.kind = InitialData::Constant;
  s.initial.value = 0.0;
  s.cells = 128;
  const ComparisonOutcome out = comparison_experiment(s);
  CHECK(out.verdict.overall);
  for (const auto& p : out.run.series) CHECK(p.sup_norm == 0.0);
}

TEST_CASE("blow-up comparison") {
  const ComparisonOutcome out = comparison_experiment(blowup_scenario());
  CHECK(out.verdict.overall);
  REQUIRE(out.run.blowup);
  const double S = out.run.blowup->S_num;
  CHECK(S <= 1.05 * out.params.T);
  CHECK(S >= 0.95 * out.run.tau0);
  for (const char* name : {"blowup_declared", "blowup_time_upper", "blowup_time_lower", "solution_above_barrier",
                           "support_inclusion"}) {
    REQUIRE(out.verdict.find(name));
    CHECK_MESSAGE(out.verdict.find(name)->pass, name);
  }
  CHECK(out.run.snapshots.back().t <= 0.95 * S * (1 + 1e-12));
}

TEST_CASE("GE1 comparisons") {
  for (Regime g : {Regime::GE1a, Regime::GE1b}) {
    const ComparisonOutcome out = comparison_experiment(ge1_scenario(g));
    CHECK_MESSAGE(out.verdict.overall, to_string(g));
    CHECK_FALSE(out.run.blowup);
  }
  Scenario s = ge1_scenario(Regime::GE1a);
  s.R = 0.0;
  CHECK_THROWS_AS(prepare(s), InvalidParameter);
}

TEST_CASE("early stop is inconclusive") {
  Scenario s = ge2_scenario();
  s.cells = 128;
  s.solver.max_steps = 50;
  const ComparisonOutcome out = comparison_experiment(s);
  CHECK(out.verdict.inconclusive);
  CHECK_FALSE(out.verdict.overall);
}

TEST_CASE("refinement does not increase comparison violations") {
  Scenario s = ge2_scenario();
  s.cells = 256;
  const double coarse = std::max(0.0, comparison_experiment(s).verdict.find("solution_below_barrier")->worst);
  s.cells = 512;
  const double fine = std::max(0.0, comparison_experiment(s).verdict.find("solution_below_barrier")->worst);
  CHECK(fine <= coarse);
}

TEST_CASE("blow-up scan is independent of the worker count") {
  const double factors[] = {0.5, 1.0, 2.0};
  const ScanOutcome one = blow_up_scan(blowup_scenario(), factors, 1);
  const ScanOutcome three = blow_up_scan(blowup_scenario(), factors, 3);
  REQUIRE(one.entries.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(one.entries[k].factor == factors[k]);
    CHECK(one.entries[k].S_num == three.entries[k].S_num);
    CHECK(one.entries[k].blowup);
  }
  CHECK(one.verdict.overall);
  CHECK(one.entries[0].S_num > one.entries[2].S_num);
}

TEST_CASE("flux matching check") {
  const PreparedScenario p = prepare(blowup_scenario());
  const Check c = flux_matching_check(std::get<BlowupSubsolution>(p.barrier), 100, 5);
  CHECK(c.pass);
}

TEST_CASE("initial data kinds") {
  CHECK(parse_initial_data("table") == InitialData::Table);
  CHECK_THROWS_AS(parse_initial_data("gauss"), InvalidParameter);
  Scenario s = ge2_scenario();
  s.cells = 64;
  s.initial.kind = InitialData::Table;
  s.initial.table = {{0.0, 1.0}, {0.5, 0.5}};
  const PreparedScenario p = prepare(s);
  CHECK(p.u0.u.front() == doctest::Approx(1.0 - p.grid.centers[0]));
  CHECK(p.u0.u.back() == 0.0);
}
