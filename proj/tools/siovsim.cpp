// siovsim: deterministic V2X + blockchain network simulator CLI.
//
// Exit codes: 0 success, 1 validation error, 2 runtime error,
// 3 partial sweep failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "siov/config.hpp"
#include "siov/log.hpp"
#include "siov/metrics.hpp"
#include "siov/simulation.hpp"
#include "siov/sweep.hpp"

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw siov::IoError("cannot write " + path.string());
  f << content;
}

template <typename Fn>
void write_file_with(const fs::path& path, Fn&& fn) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw siov::IoError("cannot write " + path.string());
  fn(f);
}

struct SimulateArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> strategy;
  std::string out_dir = "out";
  std::string event_log_path;
  std::string chain_dump_path;
  std::string occupancy_path;
  int jobs = 1;  // accepted for interface symmetry; a single run is serial
};

int cmd_simulate(const SimulateArgs& args) {
  siov::ScenarioConfig cfg = siov::load_scenario(args.config_path);
  if (args.seed) {
    cfg.seed = *args.seed;
    cfg.overridden.insert("sim.seed");
  }
  if (args.strategy) {
    cfg.strategy = *args.strategy;
    cfg.overridden.insert("connectivity.strategy");
    const auto issues = siov::validate_scenario(cfg);
    if (!issues.empty()) throw siov::ValidationError(issues);
  }

  siov::RunOptions opts;
  opts.capture_occupancy = !args.occupancy_path.empty();
  SIOV_LOG_INFO("running scenario '" << cfg.name << "' seed " << cfg.seed << " strategy "
                                     << cfg.strategy);
  const siov::RunArtifacts artifacts = siov::run_scenario(cfg, opts);

  const fs::path out(args.out_dir);
  write_file_with(out / "metrics.csv",
                  [&](std::ostream& os) { siov::write_metrics_csv({artifacts.metrics}, os); });
  write_file_with(out / "metrics.json", [&](std::ostream& os) {
    os << siov::metrics_to_json(artifacts.metrics).dump(2) << '\n';
  });
  write_file(out / "config_echo.txt", artifacts.config_echo);
  write_file_with(out / "fork_report.csv",
                  [&](std::ostream& os) { siov::write_fork_report(artifacts.fork_report, os); });
  if (!args.event_log_path.empty()) {
    write_file_with(args.event_log_path,
                    [&](std::ostream& os) { siov::write_event_log_ndjson(artifacts.log, os); });
  }
  if (!args.chain_dump_path.empty()) {
    write_file_with(args.chain_dump_path,
                    [&](std::ostream& os) { siov::write_chain_dump(artifacts.chain_dump, os); });
  }
  if (!args.occupancy_path.empty()) {
    write_file_with(args.occupancy_path,
                    [&](std::ostream& os) { siov::write_occupancy_csv(artifacts.occupancy, os); });
  }

  std::cout << "delivered " << artifacts.metrics.msgs_delivered << "/"
            << artifacts.metrics.msgs_generated << " messages, "
            << artifacts.metrics.canonical_tx << " canonical tx ("
            << siov::format_double(artifacts.metrics.tx_throughput_per_s()) << " tx/s), "
            << artifacts.metrics.blocks_mined << " blocks mined, "
            << artifacts.metrics.blocks_discarded << " discarded\n";
  return 0;
}

struct SweepArgs {
  std::string config_path;
  std::string axis = "n_vehicles";
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> strategies{"random", "max_sinr", "enhanced_max_sinr"};
  std::string out_dir = "out";
  int jobs = 1;
};

int cmd_sweep(const SweepArgs& args) {
  const siov::ScenarioConfig base = siov::load_scenario(args.config_path);
  siov::SweepSpec spec;
  spec.axis = args.axis == "n_vehicles" ? siov::SweepAxis::NVehicles
                                        : siov::SweepAxis::BlockInterval;
  spec.values = args.values;
  spec.seeds = args.seeds;
  spec.strategies = args.strategies;
  spec.jobs = args.jobs;

  SIOV_LOG_INFO("sweep over " << args.axis << ": " << spec.values.size() << " values x "
                              << spec.seeds.size() << " seeds x " << spec.strategies.size()
                              << " strategies, jobs=" << spec.jobs);
  const siov::SweepResult result = siov::run_sweep(base, spec);

  const fs::path out(args.out_dir);
  write_file_with(out / "sweep_runs.csv",
                  [&](std::ostream& os) { siov::write_metrics_csv(result.runs, os); });
  write_file_with(out / "sweep_aggregate.csv", [&](std::ostream& os) {
    siov::write_sweep_aggregate_csv(spec, result.aggregates, os);
  });

  if (!result.failures.empty()) {
    std::cerr << result.failures.size() << " sweep cell(s) failed:\n";
    for (const auto& f : result.failures) {
      std::cerr << "  value=" << f.value << " seed=" << f.seed << " strategy=" << f.strategy
                << ": " << f.error << '\n';
    }
    return 3;
  }
  std::cout << result.runs.size() << " runs completed, " << result.aggregates.size()
            << " aggregate cells written to " << (out / "sweep_aggregate.csv").string() << '\n';
  return 0;
}

int cmd_validate(const std::string& config_path) {
  const siov::ScenarioConfig cfg = siov::load_scenario(config_path);
  std::cout << "configuration ok: scenario '" << cfg.name << "'\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic V2X + blockchain network simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run one scenario");
  simulate->add_option("--config", sim.config_path, "scenario file (text or JSON)")->required();
  simulate->add_option("--seed", sim.seed, "override sim.seed");
  simulate->add_option("--strategy", sim.strategy, "override connectivity.strategy");
  simulate->add_option("--out", sim.out_dir, "output directory (default: out)");
  simulate->add_option("--event-log", sim.event_log_path, "write NDJSON event log here");
  simulate->add_option("--chain-dump", sim.chain_dump_path, "write block dump JSON here");
  simulate->add_option("--occupancy-dump", sim.occupancy_path,
                       "write per-round channel occupancy CSV here");
  simulate->add_option("--jobs", sim.jobs, "accepted for symmetry; a single run is serial");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  sweep_cmd->add_option("--config", sweep.config_path, "scenario file")->required();
  sweep_cmd->add_option("--axis", sweep.axis, "n_vehicles | block_interval")
      ->check(CLI::IsMember({"n_vehicles", "block_interval"}));
  sweep_cmd->add_option("--values", sweep.values, "axis values")->required()->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep.seeds, "seeds per cell")->required()->delimiter(',');
  sweep_cmd->add_option("--strategies", sweep.strategies, "strategies to compare")
      ->delimiter(',');
  sweep_cmd->add_option("--out", sweep.out_dir, "output directory (default: out)");
  sweep_cmd->add_option("--jobs", sweep.jobs, "parallel runs (per-run results are unaffected)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "validate a scenario file");
  validate->add_option("--config", validate_path, "scenario file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep);
    if (validate->parsed()) return cmd_validate(validate_path);
  } catch (const siov::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const siov::UnknownKeyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const siov::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
