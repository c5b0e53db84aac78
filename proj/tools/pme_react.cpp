#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pmereact/config.hpp"
#include "pmereact/errors.hpp"
#include "pmereact/harness.hpp"
#include "pmereact/report_io.hpp"

namespace fs = std::filesystem;
using namespace pmr;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailed = 2;

struct Options {
  std::string config;
  std::string out = "out";
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;
};

Json with_defaults(Json body, const ScenarioConfig& cfg) {
  body["config"] = config_echo(cfg);
  return body;
}

int feasibility(const ScenarioConfig& cfg, const fs::path& dir) {
  const Scenario& s = cfg.scenario;
  const Density density(s.density);
  FeasibilityReport report;
  if (s.barrier) {
    report = check_regime_params(s.regime, s.constants, density, *s.barrier, s.search.bound);
  } else {
    try {
      report = find_params(s.regime, s.constants, density, s.search).report;
    } catch (const InfeasibleWithinBudget& e) {
      Json j;
      j["mode"] = std::string(to_string(s.regime));
      j["overall"] = false;
      j["error"] = e.what();
      write_json(dir / "feasibility.json", with_defaults(j, cfg));
      std::cerr << "infeasible: " << e.what() << '\n';
      return kFailed;
    }
  }
  write_json(dir / "feasibility.json", with_defaults(to_json(report), cfg));
  std::printf("%s feasibility: %s\n", std::string(to_string(s.regime)).c_str(), report.overall ? "pass" : "fail");
  return report.overall ? kOk : kFailed;
}

int barrier_check(const ScenarioConfig& cfg, const fs::path& dir) {
  const PreparedScenario prep = prepare(cfg.scenario);
  const RadialFunction rho = prep.density.as_function();
  const auto points = sweep_points(prep.barrier, cfg.sweep_nr, cfg.sweep_nt);
  Verdict v = residual_sweep(prep.barrier, rho, points, &prep.report);
  const Verdict d = derivative_crosscheck(prep.barrier, cfg.crosscheck_samples, cfg.scenario.seed);
  for (const auto& c : d.checks) v.add(c);
  if (const auto* sub = std::get_if<BlowupSubsolution>(&prep.barrier)) {
    v.add(flux_matching_check(*sub, 100, cfg.scenario.seed));
  }
  Json j = to_json(v);
  j["params"] = to_json(prep.params, cfg.scenario.regime);
  write_json(dir / "verdict.json", with_defaults(j, cfg));
  std::printf("barrier-check: %s\n", v.overall ? "pass" : "fail");
  return v.overall ? kOk : kFailed;
}

int simulate(const ScenarioConfig& cfg, const fs::path& dir) {
  const PreparedScenario prep = prepare(cfg.scenario);
  const RadialSolver solver(prep.grid, prep.rho, cfg.scenario.constants, prep.solver);
  const RunResult run = solver.run(prep.u0);
  write_series_csv(dir / "series.csv", run);
  write_snapshots_csv(dir / "snapshots.csv", run, prep.grid);
  Json j = run_summary(run);
  j["R"] = prep.grid.R;
  j["cells"] = prep.grid.size();
  j["t_end"] = prep.solver.t_end;
  write_json(dir / "summary.json", with_defaults(j, cfg));
  std::printf("simulate: %s", std::string(to_string(run.reason)).c_str());
  if (run.blowup) std::printf(" S_num=%.6g", run.blowup->S_num);
  std::printf("\n");
  return run.reason == Termination::StepLimit ? kFailed : kOk;
}

int compare(const ScenarioConfig& cfg, const fs::path& dir) {
  const ComparisonOutcome out = comparison_experiment(cfg.scenario);
  const PreparedScenario prep = prepare(cfg.scenario);
  write_comparison_csv(dir / "series.csv", out.run, prep.barrier, prep.grid);
  write_snapshots_csv(dir / "snapshots.csv", out.run, prep.grid);
  write_json(dir / "summary.json", with_defaults(run_summary(out.run), cfg));
  write_json(dir / "feasibility.json", with_defaults(to_json(out.report), cfg));
  Json j = to_json(out.verdict);
  j["params"] = to_json(out.params, cfg.scenario.regime);
  j["R"] = out.R;
  write_json(dir / "verdict.json", with_defaults(j, cfg));
  std::printf("compare: %s\n", out.verdict.inconclusive ? "inconclusive" : out.verdict.overall ? "pass" : "fail");
  return out.verdict.overall ? kOk : kFailed;
}

int scan(const ScenarioConfig& cfg, const fs::path& dir, unsigned workers) {
  const ScanOutcome out = blow_up_scan(cfg.scenario, cfg.scan_factors, workers);
  write_scan_csv(dir / "scan.csv", out);
  write_json(dir / "verdict.json", with_defaults(to_json(out.verdict), cfg));
  std::printf("blow-up-scan: %s\n", out.verdict.overall ? "pass" : "fail");
  return out.verdict.overall ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial porous medium reaction solver and barrier checks"};
  app.require_subcommand(1);
  Options opt;
  const char* names[] = {"feasibility", "barrier-check", "simulate", "compare", "blow-up-scan"};
  const char* help[] = {"check or search barrier parameters", "residual, derivative and flux checks of the barrier",
                        "run the solver", "solver against barrier", "blow-up times for scaled initial data"};
  for (int i = 0; i < 5; ++i) {
    auto* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", opt.config, "scenario file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory (a subdirectory per scenario)");
    sub->add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "sampling seed (overrides [harness] seed)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  ConfigParse parsed = load_config(opt.config);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) {
      if (e.line) std::cerr << opt.config << ':' << e.line << ": " << e.message << '\n';
      else std::cerr << opt.config << ": " << e.message << '\n';
    }
    return kUsage;
  }
  ScenarioConfig& cfg = parsed.config;
  cfg.scenario.name = fs::path(opt.config).stem().string();
  if (opt.seed) cfg.scenario.seed = *opt.seed;

  const fs::path dir = fs::path(opt.out) / cfg.scenario.name;
  try {
    fs::create_directories(dir);
  } catch (const std::exception& e) {
    std::cerr << "cannot create output directory: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (cmd == "feasibility") return feasibility(cfg, dir);
    if (cmd == "barrier-check") return barrier_check(cfg, dir);
    if (cmd == "simulate") return simulate(cfg, dir);
    if (cmd == "compare") return compare(cfg, dir);
    return scan(cfg, dir, opt.workers);
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedRegime& e) {
    std::cerr << "regime error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedFamily& e) {
    std::cerr << "density family error: " << e.what() << '\n';
    return kUsage;
  } catch (const InfeasibleWithinBudget& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kFailed;
  } catch (const InfeasibleBarrier& e) {
    std::cerr << "infeasible barrier: " << e.what() << '\n';
    return kFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
