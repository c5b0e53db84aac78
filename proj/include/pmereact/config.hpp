#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pmereact/harness.hpp"

namespace pmr {

struct ConfigError {
  std::size_t line = 0;  // 0: not tied to a line
  std::string message;
};

/// Parsed scenario file. One file drives every subcommand.
struct ScenarioConfig {
  Scenario scenario;
  // True when [barrier] carries no C: parameters come from find_params.
  bool search = true;
  // "section.key = value" for every key filled from a default.
  std::vector<std::string> defaults;

  std::vector<double> scan_factors{0.5, 1.0, 2.0, 4.0};
  std::size_t sweep_nr = 200;
  std::size_t sweep_nt = 50;
  std::size_t crosscheck_samples = 1000;
};

struct ConfigParse {
  ScenarioConfig config;
  std::vector<ConfigError> errors;

  bool ok() const { return errors.empty(); }
};

// INI-like text: [section] headers, key = value lines, '#' or ';' comments.
//   [problem]  m, p, N
//   [density]  family, k, k1, k2, alpha, r0, k0, rho1, rho2, uniform
//   [barrier]  regime, C, a, T, beta, b, eps
//   [search]   bound, margin, omega_min, omega_max, omega_points
//   [solver]   R, cells, t_end, cfl_safety, blowup_threshold, boundary, reaction, reaction_fraction,
//              output_times, output_count, snapshot_stride, max_steps
//   [harness]  initial_data, scale_factor, value, table, seed, scan_factors, sweep_nr, sweep_nt, samples
// Every error is collected with its line number.
ConfigParse parse_config(std::string_view text);

// Reads and parses a file; an unreadable file is reported as a single error.
ConfigParse load_config(const std::string& path);

// Shortest round-trip decimal form used in echoes and reports.
std::string format_double(double value);

}  // namespace pmr
