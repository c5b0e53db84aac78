#include <doctest.h>

#include <cmath>
#include <random>

#include "pmereact/barrier.hpp"
#include "pmereact/errors.hpp"

using namespace pmr;

namespace {

const ProblemConstants kM2P3{2.0, 3.0, 3};

GE1Barrier unit_ge1() { return GE1Barrier({2.0, 1.5, 3}, {1.0, 0.0, 1.0, 1.0, 0.5, kE}); }

BlowupSubsolution sub(double C = 1.0, double a = 1.0) { return BlowupSubsolution(kM2P3, 2.0, {C, a, 1.0}); }

}  // namespace

TEST_CASE("GE1 closed-form values") {
  const GE1Barrier b = unit_ge1();
  for (double t : {0.0, 0.5, 7.0}) CHECK(b.value(0.0, t) == doctest::Approx(1.0).epsilon(1e-15));
  // (w^2)_r = -b C^2 (log(r+r0))^(-b-1)/(r+r0) = -1/e at the origin
  const Derivatives d = b.derivatives(0.0, 0.3);
  CHECK(d.wm_r == doctest::Approx(-1.0 / kE).epsilon(1e-14));
  CHECK(d.w_t == 0.0);
}

TEST_CASE("GE1 monotonicity") {
  const GE1Barrier b({3.0, 2.0, 3}, {0.7, 0.25, 2.0, 0.5, 0.5, 8.0});
  double prev = INFINITY;
  for (int i = 0; i <= 200; ++i) {
    const double r = 0.05 * i * i;
    const double v = b.value(r, 1.0);
    REQUIRE(v <= prev);
    prev = v;
  }
  CHECK(b.value(1.0, 2.0) > b.value(1.0, 1.0));
  CHECK(support_radius(Barrier{b}, 0.0).kind == SupportRadius::Kind::Infinite);
}

TEST_CASE("profile of the blow-up subsolution") {
  CHECK(sfrak(kE, 3.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sfrak(kE * (1 - 1e-15), 3.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(sfrak(0.0, 3.0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(sfrak(kE * kE, 3.0) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("blow-up subsolution values") {
  const BlowupSubsolution b = sub();
  CHECK(b.bunder() == 3.0);
  CHECK(b.value(0.0, 0.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK_THROWS_AS(eval(Barrier{b}, 0.0, 1.0), OutOfDomain);
  CHECK_THROWS_AS(eval(Barrier{b}, 0.0, 1.5), OutOfDomain);
}

TEST_CASE("blow-up subsolution is continuous at r = e") {
  const BlowupSubsolution b = sub(219.0, 219.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double t = 0.999 * U(rng);
    const double o = b.outer_value(kE, t);
    const double i = b.inner_value(kE, t);
    REQUIRE(std::abs(o - i) <= 1e-12 * std::max(std::abs(o), 1e-300));
  }
}

TEST_CASE("GE2 vanishes on its free boundary") {
  const GE2Barrier b(kM2P3, 2.0, {0.5, 30.0, 1.0, kE * kE});
  for (double t : {0.0, 1.0, 4.0}) {
    const SupportRadius s = b.support(t);
    REQUIRE(s.kind == SupportRadius::Kind::Finite);
    // (log(r+r0))^bbar = a/eta there
    const double eta = std::pow(1.0 + t, -0.5);
    CHECK(std::pow(std::log(s.radius + kE * kE), 4.0) == doctest::Approx(30.0 / eta).epsilon(1e-12));
    CHECK(b.value(s.radius, t) == doctest::Approx(0.0));
    CHECK(b.value(s.radius * (1 + 1e-12) + 1e-8, t) == 0.0);
    CHECK(b.value(s.radius - 1e-8, t) < 1e-3);
    CHECK_THROWS_AS(eval_derivatives(Barrier{b}, s.radius, t), KinkError);
  }
}

TEST_CASE("degenerate GE2 support at the origin") {
  const GE2Barrier b(kM2P3, 2.0, {1.0, 1.0, 1.0, kE});
  const SupportRadius s = b.support(0.0);
  CHECK(s.kind == SupportRadius::Kind::Degenerate);
  CHECK(s.radius == 0.0);
}

TEST_CASE("support monotonicity") {
  const GE2Barrier g(kM2P3, 2.0, {0.5, 30.0, 1.0, kE * kE});
  const BlowupSubsolution b = sub(219.0, 219.0);
  double g_prev = 0.0;
  double b_prev = INFINITY;
  for (int i = 0; i < 100; ++i) {
    const double t = 0.0099 * i;
    const double gr = g.support(10.0 * t).radius;
    const double br = b.support(t).radius;
    REQUIRE(gr >= g_prev);
    REQUIRE(br <= b_prev);
    g_prev = gr;
    b_prev = br;
  }
}

TEST_CASE("blow-up support shrinks to the inner zero of the profile") {
  const BlowupSubsolution b = sub();
  const SupportRadius s = b.support(1.0 - 1e-14);
  REQUIRE(s.kind == SupportRadius::Kind::Finite);
  CHECK(s.radius == doctest::Approx(kE * std::sqrt(1.0 / 3.0)).epsilon(1e-5));
}

TEST_CASE("blow-up sup-norm diverges") {
  const BlowupSubsolution b = sub(219.0, 219.0);
  CHECK(b.sup_norm(1.0 - 1e-6) > 1e3 * b.sup_norm(0.0));
  CHECK(b.sup_norm(0.0) == doctest::Approx(b.value(0.0, 0.0)));
}

TEST_CASE("flux matching at r = e") {
  const FluxMatch zero = flux_match(sub(), 0.0);
  CHECK(zero.left == 0.0);
  CHECK(zero.right == 0.0);
  CHECK(zero.closed == 0.0);

  const BlowupSubsolution b = sub(219.0, 219.0);
  for (double t : {0.0, 0.3, 0.9, 0.999}) {
    const FluxMatch f = flux_match(b, t);
    CHECK(f.closed < 0.0);
    CHECK(std::abs(f.jump) <= 1e-12 * std::abs(f.closed));
  }
}

TEST_CASE("zero region has zero derivatives and residual") {
  const GE2Barrier g(kM2P3, 2.0, {0.5, 30.0, 1.0, kE * kE});
  const double r = 2.0 * g.support(0.0).radius;
  const Derivatives d = g.derivatives(r, 0.0);
  CHECK(d.w_t == 0.0);
  CHECK(d.wm_r == 0.0);
  CHECK(d.wm_rr == 0.0);
  CHECK(d.lap_wm == 0.0);
  CHECK(residual(Barrier{g}, [](double) { return 1.0; }, r, 0.0) == 0.0);
}

TEST_CASE("derivatives are refused at the matching radius") {
  const Barrier b = sub(219.0, 219.0);
  CHECK_THROWS_AS(eval_derivatives(b, kE, 0.1), KinkError);
  CHECK_NOTHROW(eval_derivatives(b, kE + 1e-6, 0.1));
}

TEST_CASE("barrier names and roles") {
  CHECK(is_supersolution(Barrier{unit_ge1()}));
  CHECK_FALSE(is_supersolution(Barrier{sub()}));
  CHECK_THROWS_AS(BlowupSubsolution({3.0, 2.0, 3}, 2.0, {1.0, 1.0, 1.0}), UnsupportedRegime);
}
