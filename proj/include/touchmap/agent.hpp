#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "touchmap/geometry.hpp"

namespace touchmap {

/// Distances below this are clamped before inversion in the cost terms.
inline constexpr double kSingularityGuard = 1e-6;

/// P goals evenly spaced on a circle: goal k (1-based) sits at angle 2πk/P.
struct CandidateGoalSet {
  std::vector<Vec2> goals;
  Vec2 center;
  double radius{0.0};

  std::size_t count() const { return goals.size(); }
};

/// Throws InvalidParam if radius <= 0 or count == 0. Goals are not filtered
/// by feasibility; some may fall outside the workspace or inside obstacles.
CandidateGoalSet generate_candidates(Vec2 center, double radius, int count);

struct CostWeights {
  double beta{0.9};   // crowding penalty
  double gamma{0.1};  // revisit penalty
  int redundancy_exponent{2};

  /// Throws InvalidParam on negative weights, both zero, or an exponent
  /// other than 1 or 2.
  void validate() const;
};

/// Σ_j 1 / max(‖g − p_j‖, guard).
double collision_cost(Vec2 goal, std::span<const Vec2> neighbor_positions);

/// Σ_o 1 / max(‖g − o‖, guard)^exponent.
double redundancy_cost(Vec2 goal, std::span<const Vec2> logged, int exponent);

double total_cost(Vec2 goal, std::span<const Vec2> neighbors, std::span<const Vec2> logged, const CostWeights& w);

struct GoalChoice {
  Vec2 goal;
  std::size_t index{0};  // 1-based candidate index k
};

/// Candidate with the lowest total cost. Ties go to the lowest index, so a
/// robot with nothing to avoid always picks k = 1. Throws EmptyCandidates.
GoalChoice select_goal(const CandidateGoalSet& candidates, std::span<const Vec2> neighbors,
                       std::span<const Vec2> logged, const CostWeights& w);

/// speed · unit(goal − position), or zero once within reach_tolerance.
Vec2 velocity_toward(Vec2 position, Vec2 goal, double speed, double reach_tolerance = 0.01);

// Life-cycle phases of a robot.
struct Exploring {
  bool operator==(const Exploring&) const = default;
};
struct BackingOff {
  double remaining{0.0};  // meters still to retreat
  Vec2 direction;         // unit retreat direction
  bool operator==(const BackingOff&) const = default;
};
struct Terminated {
  bool operator==(const Terminated&) const = default;
};
using Phase = std::variant<Exploring, BackingOff, Terminated>;

const char* phase_name(const Phase& p);

struct RobotState {
  int id{0};
  Vec2 position;
  Vec2 velocity;
  std::optional<Vec2> goal;
  std::vector<Vec2> logged_points;
  std::vector<Vec2> path_history;  // one entry per step, starting at t = 0
  Phase phase{Exploring{}};
  Vec2 heading{1.0, 0.0};    // last non-zero direction of travel
  bool touching{false};      // tactile query fired on the previous step

  bool exploring() const { return std::holds_alternative<Exploring>(phase); }
  bool backing_off() const { return std::holds_alternative<BackingOff>(phase); }
  bool terminated() const { return std::holds_alternative<Terminated>(phase); }
};

}  // namespace touchmap
