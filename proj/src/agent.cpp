#include "touchmap/agent.hpp"

#include <algorithm>
#include <numbers>

#include <fmt/format.h>

#include "touchmap/errors.hpp"

namespace touchmap {

CandidateGoalSet generate_candidates(Vec2 center, double radius, int count) {
  if (!(radius > 0.0)) throw InvalidParam(fmt::format("candidate radius must be positive, got {}", radius));
  if (count < 1) throw InvalidParam(fmt::format("candidate count must be at least 1, got {}", count));

  CandidateGoalSet set;
  set.center = center;
  set.radius = radius;
  set.goals.reserve(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / count;
    set.goals.push_back(center + Vec2{std::cos(theta), std::sin(theta)} * radius);
  }
  return set;
}

void CostWeights::validate() const {
  if (!(beta >= 0.0) || !(gamma >= 0.0)) throw InvalidParam("cost weights must be non-negative");
  if (!(beta + gamma > 0.0)) throw InvalidParam("at least one cost weight must be positive");
  if (redundancy_exponent != 1 && redundancy_exponent != 2)
    throw InvalidParam(fmt::format("redundancy exponent must be 1 or 2, got {}", redundancy_exponent));
}

double collision_cost(Vec2 goal, std::span<const Vec2> neighbor_positions) {
  double sum = 0.0;
  for (const Vec2& p : neighbor_positions) sum += 1.0 / std::max(euclidean(goal, p), kSingularityGuard);
  return sum;
}

double redundancy_cost(Vec2 goal, std::span<const Vec2> logged, int exponent) {
  double sum = 0.0;
  for (const Vec2& o : logged) {
    const double d = std::max(euclidean(goal, o), kSingularityGuard);
    sum += exponent == 1 ? 1.0 / d : 1.0 / (d * d);
  }
  return sum;
}

double total_cost(Vec2 goal, std::span<const Vec2> neighbors, std::span<const Vec2> logged, const CostWeights& w) {
  return w.beta * collision_cost(goal, neighbors) + w.gamma * redundancy_cost(goal, logged, w.redundancy_exponent);
}

GoalChoice select_goal(const CandidateGoalSet& candidates, std::span<const Vec2> neighbors,
                       std::span<const Vec2> logged, const CostWeights& w) {
  if (candidates.goals.empty()) throw EmptyCandidates("no candidate goals to choose from");
  GoalChoice best{candidates.goals.front(), 1};
  double best_cost = total_cost(best.goal, neighbors, logged, w);
  for (std::size_t k = 1; k < candidates.goals.size(); ++k) {
    const double c = total_cost(candidates.goals[k], neighbors, logged, w);
    if (c < best_cost) {
      best_cost = c;
      best = {candidates.goals[k], k + 1};
    }
  }
  return best;
}

Vec2 velocity_toward(Vec2 position, Vec2 goal, double speed, double reach_tolerance) {
  const Vec2 delta = goal - position;
  if (delta.norm() < reach_tolerance) return {};
  return delta.normalized() * speed;
}

const char* phase_name(const Phase& p) {
  switch (p.index()) {
    case 0: return "exploring";
    case 1: return "backing_off";
    default: return "terminated";
  }
}

}  // namespace touchmap
