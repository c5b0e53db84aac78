#include "pmereact/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "pmereact/errors.hpp"

namespace pmr {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"problem", {"m", "p", "N"}},
      {"density", {"family", "k", "k1", "k2", "alpha", "r0", "k0", "rho1", "rho2", "uniform"}},
      {"barrier", {"regime", "C", "a", "T", "beta", "b", "eps"}},
      {"search", {"bound", "margin", "omega_min", "omega_max", "omega_points"}},
      {"solver",
       {"R", "cells", "t_end", "cfl_safety", "blowup_threshold", "boundary", "reaction", "reaction_fraction",
        "output_times", "output_count", "snapshot_stride", "max_steps"}},
      {"harness",
       {"initial_data", "scale_factor", "value", "table", "seed", "scan_factors", "sweep_nr", "sweep_nt",
        "samples"}},
  };
  return keys;
}

struct Entry {
  std::string value;
  std::size_t line;
};

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> to_uint(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, ScenarioConfig& cfg, std::vector<ConfigError>& errors)
      : entries_(std::move(entries)), cfg_(cfg), errors_(errors) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  std::size_t line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }

  void error(const std::string& key, const std::string& message) { errors_.push_back({line(key), key + ": " + message}); }

  void fallback(const std::string& key, const std::string& shown) { cfg_.defaults.push_back(key + " = " + shown); }

  void number(const std::string& key, double& out, bool echo = true) {
    if (!has(key)) {
      if (echo) fallback(key, format_double(out));
      return;
    }
    if (auto v = to_double(entries_.at(key).value)) out = *v;
    else error(key, "expected a finite number, got '" + entries_.at(key).value + "'");
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    if (auto v = to_double(entries_.at(key).value)) return v;
    error(key, "expected a finite number, got '" + entries_.at(key).value + "'");
    return std::nullopt;
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (!has(key)) {
      fallback(key, std::to_string(out));
      return;
    }
    if (auto v = to_uint(entries_.at(key).value)) out = static_cast<Int>(*v);
    else error(key, "expected a nonnegative integer, got '" + entries_.at(key).value + "'");
  }

  void boolean(const std::string& key, bool& out) {
    if (!has(key)) {
      fallback(key, out ? "true" : "false");
      return;
    }
    const std::string& v = entries_.at(key).value;
    if (v == "true" || v == "1" || v == "on") out = true;
    else if (v == "false" || v == "0" || v == "off") out = false;
    else error(key, "expected true or false, got '" + v + "'");
  }

  template <class Parse, class T>
  void enumeration(const std::string& key, T& out, Parse parse, std::string_view shown) {
    if (!has(key)) {
      fallback(key, std::string(shown));
      return;
    }
    try {
      out = parse(entries_.at(key).value);
    } catch (const std::exception& e) {
      error(key, e.what());
    }
  }

  std::vector<double> list(const std::string& key) {
    std::vector<double> out;
    for (auto item : split(entries_.at(key).value, ',')) {
      if (auto v = to_double(item)) out.push_back(*v);
      else {
        error(key, "expected a comma-separated list of numbers");
        return {};
      }
    }
    return out;
  }

  const std::string& raw(const std::string& key) const { return entries_.at(key).value; }

 private:
  std::map<std::string, Entry> entries_;
  ScenarioConfig& cfg_;
  std::vector<ConfigError>& errors_;
};

}  // namespace

std::string format_double(double value) {
  char buf[32];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

ConfigParse parse_config(std::string_view text) {
  ConfigParse result;
  auto& errors = result.errors;
  std::map<std::string, Entry> entries;  // "section.key"
  std::map<std::string, std::size_t> section_lines;

  std::string section;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++lineno;
    const auto hash = line.find_first_of("#;");
    line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back({lineno, "malformed section header"});
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().count(section)) errors.push_back({lineno, "unknown section [" + section + "]"});
      section_lines.emplace(section, lineno);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back({lineno, "expected key = value"});
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (section.empty()) {
      errors.push_back({lineno, "key '" + key + "' outside any section"});
      continue;
    }
    const auto sec = known_keys().find(section);
    if (sec == known_keys().end()) continue;
    if (!sec->second.count(key)) {
      errors.push_back({lineno, "unknown key '" + key + "' in [" + section + "]"});
      continue;
    }
    const std::string full = section + "." + key;
    if (entries.count(full)) {
      errors.push_back({lineno, "duplicate key '" + full + "'"});
      continue;
    }
    if (value.empty()) {
      errors.push_back({lineno, full + ": empty value"});
      continue;
    }
    entries.emplace(full, Entry{value, lineno});
  }

  ScenarioConfig& cfg = result.config;
  Scenario& s = cfg.scenario;
  Reader in(std::move(entries), cfg, errors);

  // [problem]
  in.number("problem.m", s.constants.m);
  in.number("problem.p", s.constants.p);
  {
    double N = s.constants.N;
    in.number("problem.N", N);
    if (N != std::floor(N)) in.error("problem.N", "must be an integer");
    s.constants.N = static_cast<int>(N);
  }
  if (!(s.constants.m > 1.0)) in.error("problem.m", "m must exceed 1");
  if (!(s.constants.p > 1.0)) in.error("problem.p", "p must exceed 1");
  if (s.constants.N < 3) in.error("problem.N", "N must be at least 3");
  if (s.constants.m == s.constants.p) in.error("problem.p", "p = m is not covered by any regime");

  // [density]
  DensityParams& d = s.density;
  in.enumeration("density.family", d.family, parse_density_family, to_string(d.family));
  const bool h1 = d.family == DensityFamily::H1;
  if (h1) in.number("density.k", d.k);
  else {
    in.number("density.k1", d.k1);
    in.number("density.k2", d.k2);
  }
  if (h1 && (in.has("density.k1") || in.has("density.k2"))) in.error("density.k1", "k1/k2 apply to H2 families only");
  if (!h1 && in.has("density.k")) in.error("density.k", "k applies to H1 only");
  in.number("density.alpha", d.alpha);
  in.number("density.r0", d.r0);
  d.k0 = in.optional_number("density.k0");
  d.rho1 = in.optional_number("density.rho1");
  d.rho2 = in.optional_number("density.rho2");
  in.boolean("density.uniform", s.uniform_density);
  if (!(d.alpha > 1.0)) {
    in.error("density.alpha", "alpha must exceed 1 (density hypothesis " + std::string(h1 ? "H1" : "H2") + ")");
  } else {
    try {
      validate_structure(d);
    } catch (const std::exception& e) {
      errors.push_back({in.line("density.family"), std::string("density: ") + e.what()});
    }
  }

  // [barrier]
  const bool p_below_m = s.constants.p < s.constants.m;
  s.regime = p_below_m ? Regime::GE1a : Regime::GE2;
  in.enumeration("barrier.regime", s.regime, parse_regime, to_string(s.regime));
  if (s.constants.m > 1.0 && s.constants.p > 1.0 && s.constants.m != s.constants.p) {
    try {
      check_regime(s.regime, s.constants);
    } catch (const std::exception& e) {
      in.error("barrier.regime", e.what());
    }
  }
  cfg.search = !in.has("barrier.C");
  const bool needs_a = s.regime == Regime::GE2 || s.regime == Regime::Blowup;
  if (cfg.search) {
    if (in.has("barrier.a")) in.error("barrier.a", "a without C; give both or neither");
    s.search.T = in.optional_number("barrier.T");
    s.search.beta = in.optional_number("barrier.beta");
    s.search.b = in.optional_number("barrier.b");
    s.search.eps = in.optional_number("barrier.eps");
    cfg.defaults.push_back("barrier.C = (feasibility search)");
  } else {
    BarrierParams bp;
    in.number("barrier.C", bp.C);
    if (needs_a) {
      if (!in.has("barrier.a")) in.error("barrier.C", "regime " + std::string(to_string(s.regime)) + " needs a");
      in.number("barrier.a", bp.a, false);
    }
    in.number("barrier.T", bp.T);
    if (!needs_a) {
      in.number("barrier.beta", bp.beta);
      in.number("barrier.b", bp.b);
      in.number("barrier.eps", bp.eps);
    }
    bp.r0 = d.r0;
    if (!(bp.C > 0.0)) in.error("barrier.C", "C must be positive");
    if (needs_a && !(bp.a > 0.0)) in.error("barrier.a", "a must be positive");
    if (!(bp.T > 0.0)) in.error("barrier.T", "T must be positive");
    s.barrier = bp;
  }

  // [search]
  in.enumeration("search.bound", s.search.bound, parse_ge2_bound, to_string(s.search.bound));
  in.number("search.margin", s.search.margin);
  in.number("search.omega_min", s.search.omega_min);
  in.number("search.omega_max", s.search.omega_max);
  in.integer("search.omega_points", s.search.omega_points);
  if (!(s.search.margin >= 0.0)) in.error("search.margin", "must be nonnegative");
  if (!(s.search.omega_min > 0.0 && s.search.omega_min <= s.search.omega_max)) {
    in.error("search.omega_min", "need 0 < omega_min <= omega_max");
  }
  if (s.search.omega_points < 2) in.error("search.omega_points", "need at least 2 points");

  // [solver]
  SolverConfig& sc = s.solver;
  in.number("solver.R", s.R);
  in.integer("solver.cells", s.cells);
  if (in.has("solver.t_end")) {
    in.number("solver.t_end", sc.t_end);
    s.t_end_set = true;
    if (!(sc.t_end > 0.0)) in.error("solver.t_end", "t_end must be positive");
  } else {
    cfg.defaults.push_back(std::string("solver.t_end = ") + (s.regime == Regime::Blowup ? "1.05 T" : "10 T"));
  }
  in.number("solver.cfl_safety", sc.cfl_safety);
  in.number("solver.blowup_threshold", sc.blowup_threshold);
  in.enumeration("solver.boundary", sc.boundary, parse_boundary, to_string(sc.boundary));
  in.boolean("solver.reaction", sc.reaction);
  in.number("solver.reaction_fraction", sc.reaction_fraction);
  in.integer("solver.snapshot_stride", sc.snapshot_stride);
  in.integer("solver.max_steps", sc.max_steps);
  if (in.has("solver.output_times")) {
    sc.output_times = in.list("solver.output_times");
    for (double t : sc.output_times) {
      if (t < 0.0) {
        in.error("solver.output_times", "times must be nonnegative");
        break;
      }
    }
    if (in.has("solver.output_count")) in.error("solver.output_count", "give output_times or output_count, not both");
  } else {
    in.integer("solver.output_count", s.output_count);
    if (s.output_count < 1) in.error("solver.output_count", "need at least 1");
  }
  if (s.R < 0.0) in.error("solver.R", "R must be nonnegative (0 picks twice the barrier support)");
  if (s.cells < 2) in.error("solver.cells", "need at least 2 cells");
  if (!(sc.cfl_safety > 0.0 && sc.cfl_safety <= 1.0)) in.error("solver.cfl_safety", "must lie in (0, 1]");
  if (!(sc.blowup_threshold > 0.0)) in.error("solver.blowup_threshold", "must be positive");
  if (!(sc.reaction_fraction > 0.0 && sc.reaction_fraction <= 0.1)) {
    in.error("solver.reaction_fraction", "must lie in (0, 0.1]");
  }
  if (sc.snapshot_stride < 1) in.error("solver.snapshot_stride", "must be at least 1");

  // [harness]
  InitialDataRule& init = s.initial;
  in.enumeration("harness.initial_data", init.kind, parse_initial_data, to_string(init.kind));
  if (init.kind == InitialData::Scaled) {
    in.number("harness.scale_factor", init.factor);
    if (!(init.factor >= 0.0)) in.error("harness.scale_factor", "must be nonnegative");
  } else if (in.has("harness.scale_factor")) {
    in.error("harness.scale_factor", "only used with initial_data = scaled");
  }
  if (init.kind == InitialData::Constant) {
    if (!in.has("harness.value")) in.error("harness.initial_data", "constant initial data needs value");
    in.number("harness.value", init.value, false);
    if (!(init.value >= 0.0)) in.error("harness.value", "must be nonnegative");
  } else if (in.has("harness.value")) {
    in.error("harness.value", "only used with initial_data = constant");
  }
  if (init.kind == InitialData::Table) {
    if (!in.has("harness.table")) {
      in.error("harness.initial_data", "table initial data needs table = r:u, r:u, ...");
    } else {
      double last = -1.0;
      for (auto item : split(in.raw("harness.table"), ',')) {
        const auto colon = item.find(':');
        const auto r = colon == std::string_view::npos ? std::nullopt : to_double(trim(item.substr(0, colon)));
        const auto u = colon == std::string_view::npos ? std::nullopt : to_double(trim(item.substr(colon + 1)));
        if (!r || !u || *r <= last || *u < 0.0) {
          in.error("harness.table", "expected increasing r:u pairs with u >= 0");
          init.table.clear();
          break;
        }
        last = *r;
        init.table.emplace_back(*r, *u);
      }
    }
  } else if (in.has("harness.table")) {
    in.error("harness.table", "only used with initial_data = table");
  }
  in.integer("harness.seed", s.seed);
  if (in.has("harness.scan_factors")) {
    cfg.scan_factors = in.list("harness.scan_factors");
    for (double f : cfg.scan_factors) {
      if (!(f >= 0.0)) {
        in.error("harness.scan_factors", "factors must be nonnegative");
        break;
      }
    }
  } else {
    cfg.defaults.push_back("harness.scan_factors = 0.5, 1, 2, 4");
  }
  in.integer("harness.sweep_nr", cfg.sweep_nr);
  in.integer("harness.sweep_nt", cfg.sweep_nt);
  in.integer("harness.samples", cfg.crosscheck_samples);
  if (cfg.sweep_nr < 2 || cfg.sweep_nt < 1) in.error("harness.sweep_nr", "sweep grid needs nr >= 2 and nt >= 1");

  if (s.regime == Regime::GE1a || s.regime == Regime::GE1b) {
    if (!(s.R > 0.0)) in.error("solver.R", "GE1 scenarios need an explicit R");
    if (!h1) in.error("density.family", "GE1 regimes need an H1 density");
  } else if (h1) {
    in.error("density.family", "GE2 and Blowup regimes need an H2 or H2Smooth density");
  } else if (s.regime == Regime::GE2 && d.family != DensityFamily::H2Smooth) {
    in.error("density.family", "GE2 needs an H2Smooth density");
  }

  std::stable_sort(errors.begin(), errors.end(), [](const auto& a, const auto& b) { return a.line < b.line; });
  return result;
}

ConfigParse load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ConfigParse r;
    r.errors.push_back({0, "cannot read config file '" + path + "'"});
    return r;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace pmr
