#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pmereact/config.hpp"
#include "pmereact/harness.hpp"

namespace pmr {

using Json = nlohmann::ordered_json;

// Numbers are written in shortest round-trip form so files reproduce bit-for-bit.
// Non-finite values become "inf", "-inf" or "nan" in CSV and null in JSON.

Json to_json(const BarrierParams& params, Regime regime);
Json to_json(const FeasibilityReport& report);
Json to_json(const Verdict& verdict);
Json run_summary(const RunResult& run);
Json config_echo(const ScenarioConfig& config);

// t, sup_norm, support_radius
void write_series_csv(const std::filesystem::path& path, const RunResult& run);

// t, sup_norm, support_radius, barrier_sup, barrier_support_radius, worst_violation.
// worst_violation is the cellwise barrier margin (<= 0 passes), empty when no snapshot exists at t.
void write_comparison_csv(const std::filesystem::path& path, const RunResult& run, const Barrier& barrier,
                          const RadialGrid& grid);

// t, r, u (one row per cell per snapshot)
void write_snapshots_csv(const std::filesystem::path& path, const RunResult& run, const RadialGrid& grid);

// factor, sup0, tau0, blowup, S_num, termination
void write_scan_csv(const std::filesystem::path& path, const ScanOutcome& scan);

void write_json(const std::filesystem::path& path, const Json& json);

}  // namespace pmr
