#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "touchmap/engine.hpp"
#include "touchmap/scenario.hpp"

namespace touchmap {

enum class SweepAxisKind { BetaGamma, TeamSize, CommRange };

const char* sweep_axis_name(SweepAxisKind k);

/// One experiment dimension. Only the vector matching `kind` is used.
struct SweepAxis {
  SweepAxisKind kind{SweepAxisKind::BetaGamma};
  std::vector<std::pair<double, double>> beta_gamma;
  std::vector<int> team_sizes;
  std::vector<double> comm_ranges;

  std::size_t size() const;
  std::string label(std::size_t i) const;
};

struct SweepSpec {
  Scenario base;
  std::optional<int> team_size;  // robots for non-TeamSize axes; all starts if unset
  SweepAxis axis;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir;  // empty: keep results in memory only

  /// Throws InvalidParam on an empty axis or seed list.
  void validate() const;
};

/// Sweep files are JSON: {"format_version": 1, "scenario": "<path>",
/// "axis": {"kind": "beta_gamma" | "team_size" | "comm_range", "values": [...]},
/// "seeds": [...], "robots": N, "output": "<dir>", "config": {...}}.
/// Relative paths resolve against the sweep file's directory.
SweepSpec load_sweep_spec(const std::filesystem::path& path);

/// Outcome of one (axis value, seed) run.
struct SweepRow {
  std::size_t axis_index{0};
  std::string axis_value;
  std::uint64_t seed{0};
  double beta{0.0};
  double gamma{0.0};
  int robots{0};
  double r_comm{0.0};
  bool ok{false};
  std::string error;
  RunMetrics metrics;
};

struct SummaryStat {
  double mean{0.0};
  double min{0.0};
  double max{0.0};
  double std_error{0.0};
};

/// Aggregate over the successful runs of one axis value.
struct SweepSummary {
  std::string axis_value;
  int runs{0};
  int terminated{0};
  int failed{0};
  SummaryStat sim_time;
  SummaryStat collisions;
  SummaryStat logged_points;
  SummaryStat logged_points_per_second;
};

struct SweepResults {
  SweepAxisKind axis{SweepAxisKind::BetaGamma};
  std::vector<SweepRow> rows;  // ordered by (axis index, seed position)
  std::vector<SweepSummary> summary;
};

/// One run per (axis value, seed) on a pool of `jobs` workers (0 picks the
/// hardware concurrency). Runs share nothing, so the rows do not depend on
/// scheduling. A failing run becomes a row with ok = false.
SweepResults run_sweep(const SweepSpec& spec, unsigned jobs = 0);

/// The scenario as run for one sweep cell: axis value applied, team trimmed,
/// starts jittered with the seed.
Scenario sweep_cell_scenario(const SweepSpec& spec, std::size_t axis_index, std::uint64_t seed);

/// results.csv, summary.csv and timelines/<axis value>_seed<seed>.csv.
void write_sweep_results(const SweepResults& results, const std::filesystem::path& dir);

/// Scenario with robots limited to the first `robots` starts and the starts
/// jittered by `seed`, which is also recorded in the config.
Scenario prepare_run(const Scenario& s, std::optional<int> robots, std::uint64_t seed);

/// CSV of (time_s, cumulative_logged_points), one row per logging event.
void emit_timeline(const RunMetrics& metrics, const std::filesystem::path& path);

/// One-row CSV of the run's headline metrics.
void write_metrics_csv(const RunMetrics& metrics, const std::filesystem::path& path);

struct RunOutputOptions {
  bool trajectories{false};
  bool events{false};
};

/// Writes scenario.json, metrics.csv, timeline.csv, points.csv and the map
/// grids (map_density.{pgm,csv}, map_tristate.{pgm,csv}) into dir, plus
/// trajectories.csv and events.csv when requested.
void write_run_outputs(const std::filesystem::path& dir, const Scenario& scenario, const RunResult& result,
                       const RunOutputOptions& options);

/// Re-rasterizes a run directory written by write_run_outputs. The
/// tri-state map needs trajectories.csv; without it only the density map
/// is rebuilt. Returns the files written.
std::vector<std::filesystem::path> rebuild_maps(const std::filesystem::path& run_dir,
                                                std::optional<double> cell_size,
                                                std::optional<double> kernel_radius);

}  // namespace touchmap
