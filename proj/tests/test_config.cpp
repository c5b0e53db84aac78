#include <doctest.h>

#include <algorithm>
#include <string>

#include "pmereact/config.hpp"

using namespace pmr;

namespace {

const char* kGe2 = R"(
[problem]
m = 2
p = 3
N = 3

[density]
family = H2Smooth
alpha = 2
r0 = 7.5
)";

bool has_default(const ScenarioConfig& c, const std::string& prefix) {
  return std::any_of(c.defaults.begin(), c.defaults.end(), [&](const auto& d) { return d.rfind(prefix, 0) == 0; });
}

bool mentions(const ConfigParse& p, const std::string& text) {
  return std::any_of(p.errors.begin(), p.errors.end(), [&](const auto& e) { return e.message.find(text) != std::string::npos; });
}

}  // namespace

TEST_CASE("minimal GE2 config") {
  const ConfigParse p = parse_config(kGe2);
  REQUIRE(p.ok());
  const ScenarioConfig& c = p.config;
  CHECK(c.search);
  CHECK_FALSE(c.scenario.barrier);
  CHECK(c.scenario.regime == Regime::GE2);
  CHECK(c.scenario.density.r0 == 7.5);
  CHECK(has_default(c, "barrier.regime = GE2"));
  CHECK(has_default(c, "solver.cells = 512"));
  CHECK(has_default(c, "solver.t_end = 10 T"));
  CHECK(has_default(c, "density.k1 = 1"));
}

TEST_CASE("alpha must exceed 1") {
  std::string text = kGe2;
  text.replace(text.find("alpha = 2"), 9, "alpha = 0.5");
  const ConfigParse p = parse_config(text);
  REQUIRE_FALSE(p.ok());
  CHECK(mentions(p, "alpha must exceed 1"));
  CHECK(mentions(p, "H2"));
  CHECK(p.errors.front().line == 9);
}

TEST_CASE("all errors are reported with line numbers") {
  const ConfigParse p = parse_config(R"([problem]
m = two
colour = red
[density]
family = H1
alpha = 0.5
[solver]
cells = -3
[nonsense]
)");
  CHECK(p.errors.size() >= 4);
  CHECK(mentions(p, "problem.m"));
  CHECK(mentions(p, "unknown key 'colour'"));
  CHECK(mentions(p, "H1"));
  CHECK(mentions(p, "solver.cells"));
  CHECK(mentions(p, "unknown section [nonsense]"));
  for (const auto& e : p.errors) {
    if (e.message.find("colour") != std::string::npos) CHECK(e.line == 3);
  }
}

TEST_CASE("explicit barrier parameters") {
  const ConfigParse p = parse_config(std::string(kGe2) + "[barrier]\nregime = GE2\nC = 0.3\na = 20\n");
  REQUIRE(p.ok());
  CHECK_FALSE(p.config.search);
  REQUIRE(p.config.scenario.barrier);
  CHECK(p.config.scenario.barrier->C == 0.3);
  CHECK(p.config.scenario.barrier->a == 20.0);
  CHECK(p.config.scenario.barrier->r0 == 7.5);

  const ConfigParse missing = parse_config(std::string(kGe2) + "[barrier]\nC = 0.3\n");
  CHECK(mentions(missing, "needs a"));
}

TEST_CASE("regime must match p versus m") {
  const ConfigParse p = parse_config(R"([problem]
m = 3
p = 2
[density]
family = H2
[barrier]
regime = blowup
)");
  REQUIRE_FALSE(p.ok());
  CHECK(mentions(p, "barrier.regime"));
}

TEST_CASE("solver and harness keys") {
  const ConfigParse p = parse_config(std::string(kGe2) + R"(
[solver]
R = 4
cells = 100
t_end = 2.5
boundary = neumann0
reaction = false
output_times = 0.5, 1, 2.5
[harness]
initial_data = table
table = 0:1, 1:0.5, 2:0
seed = 9
scan_factors = 1, 3
)");
  REQUIRE(p.ok());
  const Scenario& s = p.config.scenario;
  CHECK(s.R == 4.0);
  CHECK(s.cells == 100);
  CHECK(s.t_end_set);
  CHECK(s.solver.t_end == 2.5);
  CHECK(s.solver.boundary == Boundary::Neumann0);
  CHECK_FALSE(s.solver.reaction);
  CHECK(s.solver.output_times == std::vector<double>{0.5, 1.0, 2.5});
  CHECK(s.initial.kind == InitialData::Table);
  CHECK(s.initial.table.size() == 3);
  CHECK(s.seed == 9);
  CHECK(p.config.scan_factors == std::vector<double>{1.0, 3.0});
}

TEST_CASE("comments, blank lines and duplicates") {
  const ConfigParse ok = parse_config("# header\n[problem]\n; note\nm = 2  # inline\n\np = 3\n");
  CHECK(ok.config.scenario.constants.m == 2.0);
  const ConfigParse dup = parse_config("[problem]\nm = 2\nm = 3\n");
  CHECK(mentions(dup, "duplicate"));
  CHECK(mentions(parse_config("m = 2\n"), "outside any section"));
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.45, 1.0 / 3.0, 1e-300, 2.718281828459045, 123456789.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.45) == "0.45");
}
