#include "touchmap/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "csv_util.hpp"
#include "json_util.hpp"

namespace touchmap {

namespace fs = std::filesystem;

const char* sweep_axis_name(SweepAxisKind k) {
  switch (k) {
    case SweepAxisKind::BetaGamma: return "beta_gamma";
    case SweepAxisKind::TeamSize: return "team_size";
    default: return "comm_range";
  }
}

std::size_t SweepAxis::size() const {
  switch (kind) {
    case SweepAxisKind::BetaGamma: return beta_gamma.size();
    case SweepAxisKind::TeamSize: return team_sizes.size();
    default: return comm_ranges.size();
  }
}

std::string SweepAxis::label(std::size_t i) const {
  switch (kind) {
    case SweepAxisKind::BetaGamma: return fmt::format("beta={}_gamma={}", beta_gamma[i].first, beta_gamma[i].second);
    case SweepAxisKind::TeamSize: return fmt::format("robots={}", team_sizes[i]);
    default: return fmt::format("r_comm={}", comm_ranges[i]);
  }
}

void SweepSpec::validate() const {
  if (axis.size() == 0) throw InvalidParam("sweep axis has no values");
  if (seeds.empty()) throw InvalidParam("sweep has no seeds");
}

SweepSpec load_sweep_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open sweep spec {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  const std::string source = path.string();
  const auto doc = detail::parse_json(text.str(), source);

  const auto version = detail::read_integer(detail::require(doc, "format_version", source, ""), source, "format_version");
  if (version != kScenarioFormatVersion)
    detail::field_error(source, "format_version", fmt::format("unsupported version {}", version));
  for (const auto& [key, value] : doc.items())
    if (key != "format_version" && key != "scenario" && key != "axis" && key != "seeds" && key != "robots" &&
        key != "output" && key != "config")
      detail::field_error(source, key, "unknown key");

  const fs::path base_dir = path.parent_path();
  const auto& scenario_field = detail::require(doc, "scenario", source, "");
  if (!scenario_field.is_string()) detail::field_error(source, "scenario", "expected a path");
  fs::path scenario_path = scenario_field.get<std::string>();
  if (scenario_path.is_relative()) scenario_path = base_dir / scenario_path;

  SweepSpec spec;
  spec.base = load_scenario(scenario_path);
  if (const auto it = doc.find("config"); it != doc.end()) {
    detail::apply_config(spec.base.config, *it, source, "config");
    spec.base.world.walls_are_tactile = spec.base.config.walls_are_tactile;
    validate_run_inputs(spec.base.world, spec.base.starts, spec.base.config);
  }

  const auto& axis = detail::require(doc, "axis", source, "");
  const auto& kind = detail::require(axis, "kind", source, "axis");
  const auto& values = detail::require(axis, "values", source, "axis");
  if (!values.is_array()) detail::field_error(source, "axis.values", "expected a list");
  const std::string kind_name = kind.is_string() ? kind.get<std::string>() : std::string{};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string at = fmt::format("axis.values[{}]", i);
    if (kind_name == "beta_gamma") {
      spec.axis.kind = SweepAxisKind::BetaGamma;
      const Vec2 bg = detail::read_vec2(values[i], source, at);
      spec.axis.beta_gamma.emplace_back(bg.x, bg.y);
    } else if (kind_name == "team_size") {
      spec.axis.kind = SweepAxisKind::TeamSize;
      const auto n = detail::read_integer(values[i], source, at);
      if (n < 1) detail::field_error(source, at, "team size must be at least 1");
      spec.axis.team_sizes.push_back(static_cast<int>(n));
    } else if (kind_name == "comm_range") {
      spec.axis.kind = SweepAxisKind::CommRange;
      spec.axis.comm_ranges.push_back(detail::read_number(values[i], source, at));
    } else {
      detail::field_error(source, "axis.kind", "must be one of beta_gamma, team_size, comm_range");
    }
  }

  const auto& seeds = detail::require(doc, "seeds", source, "");
  if (!seeds.is_array()) detail::field_error(source, "seeds", "expected a list of integers");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto s = detail::read_integer(seeds[i], source, fmt::format("seeds[{}]", i));
    if (s < 0) detail::field_error(source, fmt::format("seeds[{}]", i), "must be non-negative");
    spec.seeds.push_back(static_cast<std::uint64_t>(s));
  }
  if (const auto it = doc.find("robots"); it != doc.end())
    spec.team_size = static_cast<int>(detail::read_integer(*it, source, "robots"));
  if (const auto it = doc.find("output"); it != doc.end()) {
    if (!it->is_string()) detail::field_error(source, "output", "expected a path");
    spec.output_dir = it->get<std::string>();
    if (spec.output_dir.is_relative()) spec.output_dir = base_dir / spec.output_dir;
  }
  try {
    spec.validate();
  } catch (const InvalidParam& e) {
    throw ParseError(fmt::format("{}: {}", source, e.what()));
  }
  return spec;
}

Scenario prepare_run(const Scenario& s, std::optional<int> robots, std::uint64_t seed) {
  Scenario out = s;
  if (robots) {
    if (*robots < 1 || static_cast<std::size_t>(*robots) > s.starts.size())
      throw InvalidScenario(fmt::format("scenario '{}' has {} starts, cannot field {} robots", s.name,
                                        s.starts.size(), *robots));
    out.starts.resize(static_cast<std::size_t>(*robots));
  }
  out.config.seed = seed;
  out.starts = jittered_starts(out, out.starts, seed);
  out.start_jitter = 0.0;  // already applied
  return out;
}

Scenario sweep_cell_scenario(const SweepSpec& spec, std::size_t axis_index, std::uint64_t seed) {
  Scenario s = spec.base;
  std::optional<int> robots = spec.team_size;
  switch (spec.axis.kind) {
    case SweepAxisKind::BetaGamma:
      s.config.beta = spec.axis.beta_gamma.at(axis_index).first;
      s.config.gamma = spec.axis.beta_gamma.at(axis_index).second;
      break;
    case SweepAxisKind::TeamSize: robots = spec.axis.team_sizes.at(axis_index); break;
    case SweepAxisKind::CommRange: s.config.r_comm = spec.axis.comm_ranges.at(axis_index); break;
  }
  return prepare_run(s, robots, seed);
}

namespace {

SummaryStat summarize(const std::vector<double>& xs) {
  SummaryStat st;
  if (xs.empty()) return st;
  st.min = *std::min_element(xs.begin(), xs.end());
  st.max = *std::max_element(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  st.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - st.mean) * (x - st.mean);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    st.std_error = sd / std::sqrt(static_cast<double>(xs.size()));
  }
  return st;
}

std::string csv_safe(std::string text) {
  std::replace_if(text.begin(), text.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; }, ';');
  return text;
}

}  // namespace

SweepResults run_sweep(const SweepSpec& spec, unsigned jobs) {
  spec.validate();
  const std::size_t n_seeds = spec.seeds.size();
  const std::size_t n_cells = spec.axis.size() * n_seeds;

  SweepResults results;
  results.axis = spec.axis.kind;
  results.rows.resize(n_cells);

  auto execute = [&](std::size_t cell) {
    SweepRow& row = results.rows[cell];
    row.axis_index = cell / n_seeds;
    row.seed = spec.seeds[cell % n_seeds];
    row.axis_value = spec.axis.label(row.axis_index);
    try {
      const Scenario s = sweep_cell_scenario(spec, row.axis_index, row.seed);
      row.beta = s.config.beta;
      row.gamma = s.config.gamma;
      row.r_comm = s.config.r_comm;
      row.robots = static_cast<int>(s.starts.size());
      row.metrics = run(s.world, s.starts, s.config).metrics;
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  };

  unsigned workers = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_cells));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_cells; ++i) execute(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n_cells; i = next++) execute(i);
      });
  }

  for (std::size_t a = 0; a < spec.axis.size(); ++a) {
    SweepSummary sum;
    sum.axis_value = spec.axis.label(a);
    std::vector<double> time, coll, pts, rate;
    for (std::size_t k = 0; k < n_seeds; ++k) {
      const SweepRow& row = results.rows[a * n_seeds + k];
      ++sum.runs;
      if (!row.ok) {
        ++sum.failed;
        continue;
      }
      if (row.metrics.terminated_all) ++sum.terminated;
      time.push_back(row.metrics.sim_time);
      coll.push_back(static_cast<double>(row.metrics.robot_collision_count));
      pts.push_back(static_cast<double>(row.metrics.total_logged_points));
      rate.push_back(row.metrics.logged_points_per_second);
    }
    sum.sim_time = summarize(time);
    sum.collisions = summarize(coll);
    sum.logged_points = summarize(pts);
    sum.logged_points_per_second = summarize(rate);
    results.summary.push_back(sum);
  }
  return results;
}

void write_sweep_results(const SweepResults& results, const fs::path& dir) {
  fs::create_directories(dir / "timelines");
  const char* axis = sweep_axis_name(results.axis);
  {
    const fs::path path = dir / "results.csv";
    auto out = detail::open_for_writing(path);
    out << "axis,axis_value,seed,beta,gamma,robots,r_comm,sim_time_s,robot_collisions,logged_points,"
           "logged_points_per_second,terminated,status,error\n";
    for (const auto& r : results.rows) {
      const auto& m = r.metrics;
      out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", axis, r.axis_value, r.seed, r.beta, r.gamma,
                         r.robots, r.r_comm, m.sim_time, m.robot_collision_count, m.total_logged_points,
                         m.logged_points_per_second, m.terminated_all ? 1 : 0, r.ok ? "ok" : "error",
                         csv_safe(r.error));
      if (r.ok) emit_timeline(m, dir / "timelines" / fmt::format("{}_seed{}.csv", r.axis_value, r.seed));
    }
    detail::finish_writing(out, path);
  }
  const fs::path path = dir / "summary.csv";
  auto out = detail::open_for_writing(path);
  out << "axis,axis_value,runs,terminated,failed";
  for (const char* metric : {"sim_time_s", "robot_collisions", "logged_points", "logged_points_per_second"})
    out << fmt::format(",{0}_mean,{0}_min,{0}_max,{0}_stderr", metric);
  out << '\n';
  for (const auto& s : results.summary) {
    out << fmt::format("{},{},{},{},{}", axis, s.axis_value, s.runs, s.terminated, s.failed);
    for (const SummaryStat* st : {&s.sim_time, &s.collisions, &s.logged_points, &s.logged_points_per_second})
      out << fmt::format(",{},{},{},{}", st->mean, st->min, st->max, st->std_error);
    out << '\n';
  }
  detail::finish_writing(out, path);
}

void emit_timeline(const RunMetrics& metrics, const fs::path& path) {
  auto out = detail::open_for_writing(path);
  out << "time_s,cumulative_logged_points\n";
  for (const auto& s : metrics.logged_points_timeline) out << fmt::format("{},{}\n", s.time_s, s.cumulative_points);
  detail::finish_writing(out, path);
}

void write_metrics_csv(const RunMetrics& m, const fs::path& path) {
  auto join = [](const std::vector<std::int64_t>& xs) { return fmt::format("{}", fmt::join(xs, ";")); };
  auto out = detail::open_for_writing(path);
  out << "robots,sim_time_s,steps,robot_collisions,logged_points,logged_points_per_second,terminated,"
         "per_robot_logged,path_redundancy\n";
  out << fmt::format("{},{},{},{},{},{},{},{},{}\n", m.per_robot_logged_counts.size(), m.sim_time, m.steps,
                     m.robot_collision_count, m.total_logged_points, m.logged_points_per_second,
                     m.terminated_all ? 1 : 0, join(m.per_robot_logged_counts), join(m.path_redundancy));
  detail::finish_writing(out, path);
}

namespace {

void write_maps(const fs::path& dir, const World& world, std::span<const Vec2> global_points,
                const TriStateGrid* tristate, double cell_size, double kernel_radius,
                std::vector<fs::path>& written) {
  const DensityGrid density = interpolate_map(global_points, world, cell_size, kernel_radius);
  export_grid(density, dir / "map_density.pgm", GridFormat::Pgm);
  export_grid(density, dir / "map_density.csv", GridFormat::Csv);
  written.push_back(dir / "map_density.pgm");
  written.push_back(dir / "map_density.csv");
  if (tristate) {
    export_grid(*tristate, dir / "map_tristate.pgm", GridFormat::Pgm);
    export_grid(*tristate, dir / "map_tristate.csv", GridFormat::Csv);
    written.push_back(dir / "map_tristate.pgm");
    written.push_back(dir / "map_tristate.csv");
  }
}

}  // namespace

void write_run_outputs(const fs::path& dir, const Scenario& scenario, const RunResult& result,
                       const RunOutputOptions& options) {
  fs::create_directories(dir);
  {
    const fs::path path = dir / "scenario.json";
    auto out = detail::open_for_writing(path);
    out << scenario_to_json(scenario);
    detail::finish_writing(out, path);
  }
  write_metrics_csv(result.metrics, dir / "metrics.csv");
  emit_timeline(result.metrics, dir / "timeline.csv");
  write_points_csv(result.map.local_sets, dir / "points.csv");
  std::vector<fs::path> written;
  write_maps(dir, scenario.world, result.map.global_set, &result.map.grid, scenario.config.map_cell_size,
             scenario.config.kernel_radius, written);
  if (options.trajectories) write_trajectory_csv(result.trajectory_log, scenario.config.dt, dir / "trajectories.csv");
  if (options.events) write_events_csv(result.events, scenario.config.dt, dir / "events.csv");
}

std::vector<fs::path> rebuild_maps(const fs::path& run_dir, std::optional<double> cell_size,
                                   std::optional<double> kernel_radius) {
  const Scenario s = load_scenario(run_dir / "scenario.json");
  const double cell = cell_size.value_or(s.config.map_cell_size);
  const double kernel = kernel_radius.value_or(std::max(s.config.kernel_radius, cell));
  auto local_sets = read_points_csv(run_dir / "points.csv");
  const auto global = aggregate(local_sets);

  std::vector<fs::path> written;
  const fs::path traj = run_dir / "trajectories.csv";
  if (fs::exists(traj)) {
    const auto paths = read_trajectory_csv(traj);
    const TriStateGrid grid = classify_grid(paths, global, s.world, cell, s.config.robot_radius);
    write_maps(run_dir, s.world, global, &grid, cell, kernel, written);
  } else {
    write_maps(run_dir, s.world, global, nullptr, cell, kernel, written);
  }
  return written;
}

}  // namespace touchmap
