#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "touchmap/agent.hpp"
#include "touchmap/comms.hpp"
#include "touchmap/mapping.hpp"
#include "touchmap/world.hpp"

namespace touchmap {

/// Every tunable of a run. Defaults suit a 7 cm robot in a 1.5 m arena.
struct SimConfig {
  double dt{0.25};              // s
  double robot_radius{0.037};   // m
  double speed{0.057};          // m/s
  double tactile_range{0.005};  // m beyond the robot disc
  double goal_radius{0.3};      // m, radius of the candidate circle
  int candidate_count{360};
  double beta{0.9};
  double gamma{0.1};
  int redundancy_exponent{2};
  double r_comm{3.0};                // m
  std::optional<double> d_min;       // m, defaults to 2 * robot_radius
  int points_to_log{100};            // per-robot termination threshold
  std::int64_t max_steps{20000};
  double backoff_distance{0.05};     // m
  std::uint64_t seed{1};
  bool log_at_robot_center{false};
  bool walls_are_tactile{true};
  double goal_reached_tolerance{0.01};  // m
  double collision_hysteresis{0.01};    // m beyond d_min before a pair re-arms
  double min_point_separation{0.002};   // m, duplicate filter during one touch
  bool backoff_on_obstacle{false};
  double map_cell_size{0.01};           // m
  double kernel_radius{0.03};           // m, interpolation kernel support
  double redundancy_cell_size{0.01};    // m, grid used for path revisits

  double effective_d_min() const { return d_min.value_or(2.0 * robot_radius); }
  CostWeights weights() const { return {beta, gamma, redundancy_exponent}; }
  /// Throws InvalidParam naming the first offending field.
  void validate() const;
};

enum class EventKind { ObstacleContact, RobotCollision, GoalReached, Terminated };

const char* event_kind_name(EventKind k);

struct ContactEvent {
  std::int64_t step{0};
  EventKind kind{EventKind::ObstacleContact};
  int robot_a{0};
  int robot_b{-1};  // only for RobotCollision
  Vec2 position;    // logged point, collision midpoint, or robot position
  ContactSource source;  // only for ObstacleContact

  bool operator==(const ContactEvent&) const = default;
};

struct TimelineSample {
  double time_s{0.0};
  std::int64_t cumulative_points{0};
};

struct RunMetrics {
  double sim_time{0.0};
  std::int64_t steps{0};
  std::int64_t robot_collision_count{0};
  std::int64_t total_logged_points{0};
  double logged_points_per_second{0.0};
  std::vector<std::int64_t> per_robot_logged_counts;
  std::vector<TimelineSample> logged_points_timeline;
  std::vector<std::int64_t> path_redundancy;
  bool terminated_all{false};
};

/// Per-step record of one robot, for trajectory export.
struct TrajectorySample {
  std::int64_t step{0};
  int robot_id{0};
  Vec2 position;
  std::size_t phase_index{0};  // index into Phase
  std::optional<Vec2> goal;
};

enum class ExitReason { AllTerminated, MaxStepsExceeded };

struct RunResult {
  RunMetrics metrics;
  ExplorationMap map;
  std::vector<std::vector<Vec2>> trajectories;  // path history per robot
  std::vector<TrajectorySample> trajectory_log;
  std::vector<ContactEvent> events;
  ExitReason exit{ExitReason::AllTerminated};
};

/// Deterministic discrete-time simulation of the robot team.
///
/// Each step takes one position snapshot of the whole team, then updates
/// robots in ascending id order. A robot either retreats (BackingOff) or
/// moves toward its goal, is kept out of obstacles and inside the walls, and
/// queries its tactile sensor. A contact logs the touched surface point and
/// triggers a new goal, as does reaching the goal. New goals are chosen from
/// the start-of-step snapshot, so the update order never changes a decision.
/// After all robots moved, pairs closer than d_min are counted once per
/// contact episode and sent into BackingOff. A robot that has logged
/// points_to_log points stops for good.
class Simulation {
 public:
  /// Throws InvalidScenario when validate_run_inputs rejects the inputs.
  Simulation(World world, std::span<const Vec2> starts, SimConfig cfg);

  /// Advances one step and returns the events it produced.
  std::vector<ContactEvent> step();

  bool all_terminated() const;
  std::int64_t step_index() const { return step_; }
  double time() const { return static_cast<double>(step_) * cfg_.dt; }

  const std::vector<RobotState>& robots() const { return robots_; }
  const World& world() const { return world_; }
  const SimConfig& config() const { return cfg_; }
  std::int64_t collision_count() const { return collisions_; }
  const std::vector<TimelineSample>& timeline() const { return timeline_; }
  const std::vector<TrajectorySample>& trajectory_log() const { return trajectory_log_; }

  /// Overrides a robot's current goal. Test and tooling hook.
  void assign_goal(int robot_id, Vec2 goal);

 private:
  std::vector<RobotPosition> snapshot() const;
  void reselect_goal(RobotState& robot, std::span<const RobotPosition> snap);
  void advance_robot(RobotState& robot, std::span<const RobotPosition> snap, std::vector<ContactEvent>& events);
  void detect_robot_collisions(std::vector<ContactEvent>& events);
  void record_trajectory();

  World world_;
  SimConfig cfg_;
  std::vector<RobotState> robots_;
  std::vector<char> pair_armed_;  // n*n, upper triangle used
  std::int64_t step_{0};
  std::int64_t collisions_{0};
  std::int64_t logged_total_{0};
  std::vector<TimelineSample> timeline_;
  std::vector<TrajectorySample> trajectory_log_;
};

/// Checks run preconditions: valid config and world, at least one robot,
/// every start disc inside bounds and clear of obstacles, starts pairwise at
/// least d_min apart. Throws InvalidScenario (config problems included).
void validate_run_inputs(const World& world, std::span<const Vec2> starts, const SimConfig& cfg);

/// Runs until every robot has terminated or max_steps is reached; hitting
/// the cutoff is reported through RunResult::exit, not thrown.
RunResult run(const World& world, std::span<const Vec2> starts, const SimConfig& cfg);

/// Number of path points whose grid cell was already visited by an earlier
/// point of the same path. Throws InvalidParam if cell_size <= 0.
std::int64_t path_redundancy(std::span<const Vec2> path, double cell_size);

/// CSV columns: step, time_s, robot_id, x, y, phase, goal_x, goal_y.
void write_trajectory_csv(std::span<const TrajectorySample> log, double dt, const std::filesystem::path& path);
/// CSV columns: step, time_s, kind, robot_ids, x, y.
void write_events_csv(std::span<const ContactEvent> events, double dt, const std::filesystem::path& path);
/// Per-robot paths recovered from a trajectory CSV.
std::vector<std::vector<Vec2>> read_trajectory_csv(const std::filesystem::path& path);

}  // namespace touchmap
