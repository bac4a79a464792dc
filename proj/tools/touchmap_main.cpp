// touchmap: run tactile multi-robot exploration scenarios and sweeps.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "touchmap/errors.hpp"
#include "touchmap/harness.hpp"

namespace fs = std::filesystem;
using namespace touchmap;

namespace {

int cmd_run(const fs::path& scenario_path, std::uint64_t seed, std::optional<int> robots, const fs::path& out,
            const RunOutputOptions& opts) {
  const Scenario base = load_scenario(scenario_path);
  const Scenario s = prepare_run(base, robots, seed);
  const RunResult result = run(s.world, s.starts, s.config);
  write_run_outputs(out, s, result, opts);

  const auto& m = result.metrics;
  fmt::print("scenario        {}\n", s.name);
  fmt::print("robots          {}\n", s.starts.size());
  fmt::print("seed            {}\n", seed);
  fmt::print("sim time (s)    {}\n", m.sim_time);
  fmt::print("collisions      {}\n", m.robot_collision_count);
  fmt::print("logged points   {}\n", m.total_logged_points);
  fmt::print("points / s      {:.4f}\n", m.logged_points_per_second);
  fmt::print("terminated      {}\n", m.terminated_all ? "yes" : "no (max_steps reached)");
  fmt::print("output          {}\n", out.string());
  return 0;
}

int cmd_sweep(const fs::path& spec_path, std::optional<fs::path> out, unsigned jobs) {
  SweepSpec spec = load_sweep_spec(spec_path);
  if (out) spec.output_dir = *out;
  if (spec.output_dir.empty()) spec.output_dir = "sweep_out";
  const SweepResults results = run_sweep(spec, jobs);
  write_sweep_results(results, spec.output_dir);

  fmt::print("{:<28} {:>5} {:>5} {:>10} {:>11} {:>9} {:>8}\n", "axis value", "runs", "term", "time (s)",
             "collisions", "points", "pts/s");
  for (const auto& s : results.summary)
    fmt::print("{:<28} {:>5} {:>5} {:>10.1f} {:>11.2f} {:>9.1f} {:>8.3f}\n", s.axis_value, s.runs, s.terminated,
               s.sim_time.mean, s.collisions.mean, s.logged_points.mean, s.logged_points_per_second.mean);
  fmt::print("results written to {}\n", spec.output_dir.string());
  return 0;
}

int cmd_map(const fs::path& run_dir, std::optional<double> cell, std::optional<double> kernel) {
  for (const auto& p : rebuild_maps(run_dir, cell, kernel)) fmt::print("wrote {}\n", p.string());
  return 0;
}

int cmd_validate(const fs::path& scenario_path) {
  const Scenario s = load_scenario(scenario_path);
  fmt::print("{}: ok ({} robots, {} obstacles, format version {})\n", s.name, s.starts.size(),
             s.world.obstacles.size(), kScenarioFormatVersion);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tactile multi-robot exploration simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::uint64_t seed = 1;
  std::optional<int> robots;
  std::string out = "run_out";
  RunOutputOptions opts;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", seed, "Seed for start-pose jitter");
  run_cmd->add_option("--robots", robots, "Use only the first N starts");
  run_cmd->add_option("--out", out, "Output directory");
  run_cmd->add_flag("--trajectories", opts.trajectories, "Write trajectories.csv");
  run_cmd->add_flag("--events", opts.events, "Write events.csv");

  std::string spec_path;
  std::optional<std::string> sweep_out;
  unsigned jobs = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep_cmd->add_option("spec", spec_path, "Sweep spec file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", sweep_out, "Output directory (overrides the spec)");
  sweep_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

  std::string run_dir;
  std::optional<double> cell_size;
  std::optional<double> kernel_radius;
  auto* map_cmd = app.add_subcommand("map", "Re-rasterize and export the maps of a run directory");
  map_cmd->add_option("run-dir", run_dir, "Directory written by 'run'")->required()->check(CLI::ExistingDirectory);
  map_cmd->add_option("--cell-size", cell_size, "Grid cell size in meters");
  map_cmd->add_option("--kernel-radius", kernel_radius, "Interpolation kernel radius in meters");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("scenario", validate_path, "Scenario file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(scenario_path, seed, robots, out, opts);
    if (*sweep_cmd) return cmd_sweep(spec_path, sweep_out ? std::optional<fs::path>(*sweep_out) : std::nullopt, jobs);
    if (*map_cmd) return cmd_map(run_dir, cell_size, kernel_radius);
    if (*validate_cmd) return cmd_validate(validate_path);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidScenario& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
