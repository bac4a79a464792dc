#include "touchmap/engine.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "csv_util.hpp"
#include "touchmap/errors.hpp"

namespace touchmap {

void SimConfig::validate() const {
  auto require = [](bool ok, const char* field, const char* rule) {
    if (!ok) throw InvalidParam(fmt::format("config field '{}' must be {}", field, rule));
  };
  require(dt > 0.0, "dt", "positive");
  require(robot_radius > 0.0, "robot_radius", "positive");
  require(speed > 0.0, "speed", "positive");
  require(tactile_range >= 0.0, "tactile_range", "non-negative");
  require(goal_radius > 0.0, "goal_radius", "positive");
  require(candidate_count >= 1, "candidate_count", "at least 1");
  require(r_comm > 0.0, "r_comm", "positive");
  require(effective_d_min() >= 2.0 * robot_radius, "d_min", "at least 2 * robot_radius");
  require(points_to_log >= 1, "points_to_log", "at least 1");
  require(max_steps >= 1, "max_steps", "at least 1");
  require(backoff_distance >= 0.0, "backoff_distance", "non-negative");
  require(goal_reached_tolerance > 0.0, "goal_reached_tolerance", "positive");
  require(collision_hysteresis >= 0.0, "collision_hysteresis", "non-negative");
  require(min_point_separation >= 0.0, "min_point_separation", "non-negative");
  require(map_cell_size > 0.0, "map_cell_size", "positive");
  require(kernel_radius >= map_cell_size, "kernel_radius", "at least map_cell_size");
  require(redundancy_cell_size > 0.0, "redundancy_cell_size", "positive");
  weights().validate();
}

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::ObstacleContact: return "obstacle_contact";
    case EventKind::RobotCollision: return "robot_collision";
    case EventKind::GoalReached: return "goal_reached";
    default: return "terminated";
  }
}

void validate_run_inputs(const World& world, std::span<const Vec2> starts, const SimConfig& cfg) {
  try {
    cfg.validate();
    validate_world(world);
  } catch (const InvalidParam& e) {
    throw InvalidScenario(e.what());
  }
  if (starts.empty()) throw InvalidScenario("a run needs at least one robot");
  const double d_min = cfg.effective_d_min();
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (!starts[i].is_finite()) throw InvalidScenario(fmt::format("start {} is not finite", i));
    if (!disc_is_free(starts[i], cfg.robot_radius, world))
      throw InvalidScenario(fmt::format("start {} at ({}, {}) overlaps a wall or obstacle", i, starts[i].x,
                                        starts[i].y));
    for (std::size_t j = 0; j < i; ++j)
      if (euclidean(starts[i], starts[j]) < d_min)
        throw InvalidScenario(fmt::format("starts {} and {} are closer than d_min = {}", j, i, d_min));
  }
}

Simulation::Simulation(World world, std::span<const Vec2> starts, SimConfig cfg)
    : world_(std::move(world)), cfg_(std::move(cfg)) {
  world_.walls_are_tactile = cfg_.walls_are_tactile;
  validate_run_inputs(world_, starts, cfg_);

  robots_.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    RobotState r;
    r.id = static_cast<int>(i);
    r.position = starts[i];
    r.path_history.push_back(starts[i]);
    robots_.push_back(std::move(r));
  }
  pair_armed_.assign(robots_.size() * robots_.size(), 1);

  const auto snap = snapshot();
  for (auto& r : robots_) reselect_goal(r, snap);
  record_trajectory();
}

std::vector<RobotPosition> Simulation::snapshot() const {
  std::vector<RobotPosition> snap;
  snap.reserve(robots_.size());
  for (const auto& r : robots_) snap.push_back({r.id, r.position});
  return snap;
}

void Simulation::reselect_goal(RobotState& robot, std::span<const RobotPosition> snap) {
  const auto neighbors = neighbor_set(snap, robot.id, cfg_.r_comm, step_).positions();
  const auto candidates = generate_candidates(robot.position, cfg_.goal_radius, cfg_.candidate_count);
  robot.goal = select_goal(candidates, neighbors, robot.logged_points, cfg_.weights()).goal;
}

void Simulation::assign_goal(int robot_id, Vec2 goal) {
  robots_.at(static_cast<std::size_t>(robot_id)).goal = goal;
}

bool Simulation::all_terminated() const {
  return std::all_of(robots_.begin(), robots_.end(), [](const RobotState& r) { return r.terminated(); });
}

void Simulation::advance_robot(RobotState& robot, std::span<const RobotPosition> snap,
                               std::vector<ContactEvent>& events) {
  if (robot.terminated()) {
    robot.path_history.push_back(robot.position);
    return;
  }

  if (auto* back = std::get_if<BackingOff>(&robot.phase)) {
    const double move = std::min(cfg_.speed * cfg_.dt, back->remaining);
    robot.velocity = back->direction * cfg_.speed;
    robot.position = resolve_penetration(robot.position + back->direction * move, cfg_.robot_radius, world_);
    back->remaining -= move;
    if (back->remaining <= 1e-12) {
      robot.phase = Exploring{};
      reselect_goal(robot, snap);
    }
  } else {
    if (!robot.goal) reselect_goal(robot, snap);
    const Vec2 v = velocity_toward(robot.position, *robot.goal, cfg_.speed, cfg_.goal_reached_tolerance);
    robot.velocity = v;
    if (v != Vec2{}) robot.heading = v.normalized();
    robot.position = resolve_penetration(robot.position + v * cfg_.dt, cfg_.robot_radius, world_);
  }

  const auto contact = contact_query(robot.position, cfg_.robot_radius, cfg_.tactile_range, world_);
  if (contact.in_contact) {
    const Vec2 point = cfg_.log_at_robot_center ? robot.position : contact.contact_point;
    const bool same_touch = robot.touching && !robot.logged_points.empty() &&
                            euclidean(point, robot.logged_points.back()) < cfg_.min_point_separation;
    if (!same_touch) {
      robot.logged_points.push_back(point);
      ++logged_total_;
      timeline_.push_back({time(), logged_total_});
      events.push_back({step_, EventKind::ObstacleContact, robot.id, -1, point, contact.source});
    }
    if (robot.exploring()) {
      if (cfg_.backoff_on_obstacle) {
        Vec2 away = (robot.position - contact.contact_point).normalized();
        if (away == Vec2{}) away = -robot.heading;
        robot.phase = BackingOff{cfg_.backoff_distance, away};
      } else {
        reselect_goal(robot, snap);
      }
    }
  }
  robot.touching = contact.in_contact;

  if (robot.exploring() && robot.goal && euclidean(robot.position, *robot.goal) < cfg_.goal_reached_tolerance) {
    events.push_back({step_, EventKind::GoalReached, robot.id, -1, robot.position, {}});
    reselect_goal(robot, snap);
  }

  if (robot.logged_points.size() >= static_cast<std::size_t>(cfg_.points_to_log)) {
    robot.phase = Terminated{};
    robot.velocity = {};
    events.push_back({step_, EventKind::Terminated, robot.id, -1, robot.position, {}});
  }
  robot.path_history.push_back(robot.position);
}

void Simulation::detect_robot_collisions(std::vector<ContactEvent>& events) {
  const double d_min = cfg_.effective_d_min();
  const std::size_t n = robots_.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      RobotState& ra = robots_[a];
      RobotState& rb = robots_[b];
      const double d = euclidean(ra.position, rb.position);
      char& armed = pair_armed_[a * n + b];
      if (d < d_min) {
        if (armed) {
          ++collisions_;
          armed = 0;
          events.push_back({step_, EventKind::RobotCollision, ra.id, rb.id, (ra.position + rb.position) * 0.5, {}});
        }
        // Re-entered every step of the episode so the pair keeps separating.
        auto retreat = [this](RobotState& self, const RobotState& other) {
          if (self.terminated()) return;
          Vec2 away = (self.position - other.position).normalized();
          if (away == Vec2{}) away = -self.heading;
          self.phase = BackingOff{cfg_.backoff_distance, away};
        };
        retreat(ra, rb);
        retreat(rb, ra);
      } else if (d > d_min + cfg_.collision_hysteresis) {
        armed = 1;
      }
    }
  }
}

void Simulation::record_trajectory() {
  for (const auto& r : robots_) trajectory_log_.push_back({step_, r.id, r.position, r.phase.index(), r.goal});
}

std::vector<ContactEvent> Simulation::step() {
  const auto snap = snapshot();
  ++step_;
  std::vector<ContactEvent> events;
  for (auto& r : robots_) advance_robot(r, snap, events);
  detect_robot_collisions(events);
  record_trajectory();
  return events;
}

RunResult run(const World& world, std::span<const Vec2> starts, const SimConfig& cfg) {
  Simulation sim(world, starts, cfg);
  RunResult result;
  while (!sim.all_terminated() && sim.step_index() < cfg.max_steps) {
    auto events = sim.step();
    result.events.insert(result.events.end(), events.begin(), events.end());
  }
  result.exit = sim.all_terminated() ? ExitReason::AllTerminated : ExitReason::MaxStepsExceeded;

  RunMetrics& m = result.metrics;
  m.steps = sim.step_index();
  m.sim_time = sim.time();
  m.robot_collision_count = sim.collision_count();
  m.logged_points_timeline = sim.timeline();
  m.terminated_all = sim.all_terminated();

  std::vector<std::vector<Vec2>> local_sets;
  for (const auto& r : sim.robots()) {
    const auto count = static_cast<std::int64_t>(r.logged_points.size());
    m.per_robot_logged_counts.push_back(count);
    m.total_logged_points += count;
    m.path_redundancy.push_back(path_redundancy(r.path_history, cfg.redundancy_cell_size));
    local_sets.push_back(r.logged_points);
    result.trajectories.push_back(r.path_history);
  }
  m.logged_points_per_second = m.sim_time > 0.0 ? static_cast<double>(m.total_logged_points) / m.sim_time : 0.0;

  result.map = build_exploration_map(std::move(local_sets), result.trajectories, sim.world(), cfg.map_cell_size,
                                     cfg.robot_radius);
  result.trajectory_log = sim.trajectory_log();
  return result;
}

std::int64_t path_redundancy(std::span<const Vec2> path, double cell_size) {
  if (!(cell_size > 0.0)) throw InvalidParam(fmt::format("cell size must be positive, got {}", cell_size));
  std::set<std::pair<std::int64_t, std::int64_t>> visited;
  std::int64_t revisits = 0;
  for (const Vec2& p : path) {
    const auto cell = std::pair{static_cast<std::int64_t>(std::floor(p.x / cell_size)),
                                static_cast<std::int64_t>(std::floor(p.y / cell_size))};
    if (!visited.insert(cell).second) ++revisits;
  }
  return revisits;
}

void write_trajectory_csv(std::span<const TrajectorySample> log, double dt, const std::filesystem::path& path) {
  static constexpr const char* kPhaseNames[] = {"exploring", "backing_off", "terminated"};
  auto out = detail::open_for_writing(path);
  out << "step,time_s,robot_id,x,y,phase,goal_x,goal_y\n";
  for (const auto& s : log) {
    const std::string goal = s.goal ? fmt::format("{},{}", s.goal->x, s.goal->y) : std::string(",");
    out << fmt::format("{},{},{},{},{},{},{}\n", s.step, static_cast<double>(s.step) * dt, s.robot_id, s.position.x,
                       s.position.y, kPhaseNames[s.phase_index], goal);
  }
  detail::finish_writing(out, path);
}

void write_events_csv(std::span<const ContactEvent> events, double dt, const std::filesystem::path& path) {
  auto out = detail::open_for_writing(path);
  out << "step,time_s,kind,robot_ids,x,y\n";
  for (const auto& e : events) {
    const std::string ids = e.robot_b >= 0 ? fmt::format("{};{}", e.robot_a, e.robot_b) : fmt::format("{}", e.robot_a);
    out << fmt::format("{},{},{},{},{},{}\n", e.step, static_cast<double>(e.step) * dt, event_kind_name(e.kind), ids,
                       e.position.x, e.position.y);
  }
  detail::finish_writing(out, path);
}

std::vector<std::vector<Vec2>> read_trajectory_csv(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty() || lines.front().rfind("step,time_s,robot_id,x,y", 0) != 0)
    throw ParseError(fmt::format("{}:1: not a trajectory file", path.string()));
  std::vector<std::vector<Vec2>> paths;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = detail::split_fields(lines[i]);
    if (f.size() != 8) throw ParseError(fmt::format("{}:{}: expected 8 fields", path.string(), i + 1));
    const auto id = detail::parse_int(f[2], path, i + 1);
    if (id < 0) throw ParseError(fmt::format("{}:{}: negative robot id", path.string(), i + 1));
    if (paths.size() <= static_cast<std::size_t>(id)) paths.resize(static_cast<std::size_t>(id) + 1);
    paths[static_cast<std::size_t>(id)].push_back(
        {detail::parse_double(f[3], path, i + 1), detail::parse_double(f[4], path, i + 1)});
  }
  return paths;
}

}  // namespace touchmap
