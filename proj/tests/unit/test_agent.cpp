#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "touchmap/agent.hpp"
#include "touchmap/errors.hpp"

using namespace touchmap;

namespace {

// Brute-force argmin written from the cost definition, kept apart from the
// library's scan: every cost goes into a table, and the first minimum wins.
std::size_t oracle_argmin(const std::vector<Vec2>& goals, const std::vector<Vec2>& neighbors,
                          const std::vector<Vec2>& logged, double beta, double gamma, int exponent) {
  std::vector<double> costs;
  for (const Vec2& g : goals) {
    double coll = 0.0, red = 0.0;
    for (const Vec2& p : neighbors) {
      const double d = std::max(std::sqrt((g.x - p.x) * (g.x - p.x) + (g.y - p.y) * (g.y - p.y)), 1e-6);
      coll += 1.0 / d;
    }
    for (const Vec2& o : logged) {
      const double d = std::max(std::sqrt((g.x - o.x) * (g.x - o.x) + (g.y - o.y) * (g.y - o.y)), 1e-6);
      red += exponent == 1 ? 1.0 / d : 1.0 / (d * d);
    }
    costs.push_back(beta * coll + gamma * red);
  }
  return static_cast<std::size_t>(std::min_element(costs.begin(), costs.end()) - costs.begin()) + 1;
}

}  // namespace

TEST(GenerateCandidates, CardinalPoints) {
  const auto set = generate_candidates({0, 0}, 0.3, 4);
  ASSERT_EQ(set.count(), 4u);
  const Vec2 want[] = {{0, 0.3}, {-0.3, 0}, {0, -0.3}, {0.3, 0}};
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(set.goals[k].x, want[k].x, 1e-12);
    EXPECT_NEAR(set.goals[k].y, want[k].y, 1e-12);
  }
}

TEST(GenerateCandidates, SingleCandidateSitsAtFullTurn) {
  const auto set = generate_candidates({1, 1}, 0.3, 1);
  ASSERT_EQ(set.count(), 1u);
  EXPECT_NEAR(set.goals[0].x, 1.3, 1e-12);
  EXPECT_NEAR(set.goals[0].y, 1.0, 1e-12);
}

TEST(GenerateCandidates, ThreeHundredSixtyEvenlySpaced) {
  const auto set = generate_candidates({0, 0}, 0.3, 360);
  ASSERT_EQ(set.count(), 360u);
  for (std::size_t k = 0; k < 360; ++k) {
    const Vec2 a = set.goals[k], b = set.goals[(k + 1) % 360];
    double gap = std::atan2(b.y, b.x) - std::atan2(a.y, a.x);
    if (gap < 0) gap += 2 * std::numbers::pi;
    EXPECT_NEAR(gap, 2 * std::numbers::pi / 360, 1e-9);
  }
}

TEST(GenerateCandidates, TranslationInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 50; ++i) {
    const Vec2 c{u(rng), u(rng)};
    const auto base = generate_candidates({0, 0}, 0.3, 37);
    const auto moved = generate_candidates(c, 0.3, 37);
    for (std::size_t k = 0; k < 37; ++k) {
      EXPECT_NEAR(moved.goals[k].x, base.goals[k].x + c.x, 1e-12);
      EXPECT_NEAR(moved.goals[k].y, base.goals[k].y + c.y, 1e-12);
    }
  }
}

TEST(GenerateCandidates, RejectsBadParameters) {
  EXPECT_THROW(generate_candidates({0, 0}, 0.0, 4), InvalidParam);
  EXPECT_THROW(generate_candidates({0, 0}, -1.0, 4), InvalidParam);
  EXPECT_THROW(generate_candidates({0, 0}, 0.3, 0), InvalidParam);
}

TEST(CollisionCost, Examples) {
  EXPECT_EQ(collision_cost({0, 0}, {}), 0.0);
  const std::vector<Vec2> one{{1, 0}};
  EXPECT_DOUBLE_EQ(collision_cost({0, 0}, one), 1.0);
  const std::vector<Vec2> two{{1, 0}, {0, 1}};
  // 1/0.7 + 1/sqrt(1.09) = 1.4285714 + 0.9578263
  EXPECT_NEAR(collision_cost({0.3, 0}, two), 2.3863977, 1e-5);
}

TEST(CollisionCost, SingularityIsGuarded) {
  const std::vector<Vec2> at{{0.5, 0.5}};
  EXPECT_DOUBLE_EQ(collision_cost({0.5, 0.5}, at), 1.0 / kSingularityGuard);
  EXPECT_DOUBLE_EQ(redundancy_cost({0.5, 0.5}, at, 2), 1.0 / (kSingularityGuard * kSingularityGuard));
}

TEST(RedundancyCost, Examples) {
  EXPECT_EQ(redundancy_cost({0.2, -0.7}, {}, 2), 0.0);
  const std::vector<Vec2> logged{{0, 1}};
  EXPECT_NEAR(redundancy_cost({0.3, 0}, logged, 2), 0.91743, 1e-5);
  EXPECT_NEAR(redundancy_cost({0.3, 0}, logged, 1), 0.95783, 1e-5);
}

TEST(TotalCost, Examples) {
  const std::vector<Vec2> neighbors{{1, 0}};
  const std::vector<Vec2> logged{{0, 1}};
  EXPECT_NEAR(total_cost({0.3, 0}, neighbors, logged, {0.9, 0.1, 2}), 1.37746, 1e-5);
  EXPECT_EQ(total_cost({0.3, 0}, neighbors, logged, {1.0, 0.0, 2}), collision_cost({0.3, 0}, neighbors));
  EXPECT_EQ(total_cost({0.3, 0}, {}, logged, {0.0, 1.0, 2}), redundancy_cost({0.3, 0}, logged, 2));
}

TEST(TotalCost, StrictlyDecreasingWithDistance) {
  const CostWeights w{0.9, 0.1, 2};
  double prev_n = INFINITY, prev_l = INFINITY;
  for (double d = 0.01; d < 3.0; d += 0.01) {
    const std::vector<Vec2> lone{{d, 0}};
    const double cn = total_cost({0, 0}, lone, {}, w);
    const double cl = total_cost({0, 0}, {}, lone, w);
    EXPECT_LT(cn, prev_n);
    EXPECT_LT(cl, prev_l);
    prev_n = cn;
    prev_l = cl;
  }
}

TEST(CostWeights, Validation) {
  EXPECT_NO_THROW((CostWeights{0.9, 0.1, 2}.validate()));
  EXPECT_THROW((CostWeights{-0.1, 0.1, 2}.validate()), InvalidParam);
  EXPECT_THROW((CostWeights{0.0, 0.0, 2}.validate()), InvalidParam);
  EXPECT_THROW((CostWeights{0.5, 0.5, 3}.validate()), InvalidParam);
}

TEST(SelectGoal, AvoidsLoneNeighbor) {
  const auto set = generate_candidates({0, 0}, 0.3, 4);
  const std::vector<Vec2> neighbors{{0.3, 0.01}};
  const auto choice = select_goal(set, neighbors, {}, {0.9, 0.1, 2});
  // Oracle over the four costs picks (-0.3, 0), candidate k = 2.
  EXPECT_EQ(choice.index, oracle_argmin(set.goals, neighbors, {}, 0.9, 0.1, 2));
  EXPECT_EQ(choice.index, 2u);
  EXPECT_NEAR(choice.goal.x, -0.3, 1e-12);
}

TEST(SelectGoal, AllTiesPickFirstCandidate) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 20; ++i) {
    const auto set = generate_candidates({u(rng), u(rng)}, 0.3, 360);
    EXPECT_EQ(select_goal(set, {}, {}, {0.9, 0.1, 2}).index, 1u);
  }
}

TEST(SelectGoal, EmptyCandidatesThrow) {
  EXPECT_THROW(select_goal(CandidateGoalSet{}, {}, {}, {0.9, 0.1, 2}), EmptyCandidates);
}

TEST(SelectGoal, MatchesExhaustiveOracleAtFullResolution) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-0.75, 0.75);
  std::vector<Vec2> neighbors, logged;
  for (int i = 0; i < 6; ++i) neighbors.push_back({u(rng), u(rng)});
  for (int i = 0; i < 40; ++i) logged.push_back({u(rng), u(rng)});
  const auto set = generate_candidates({0.1, -0.2}, 0.3, 360);
  EXPECT_EQ(select_goal(set, neighbors, logged, {0.9, 0.1, 2}).index,
            oracle_argmin(set.goals, neighbors, logged, 0.9, 0.1, 2));
}

TEST(SelectGoal, ArgminInvariantUnderWeightScaling) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-0.75, 0.75);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<Vec2> neighbors, logged;
    for (int k = 0; k < 4; ++k) neighbors.push_back({u(rng), u(rng)});
    for (int k = 0; k < 12; ++k) logged.push_back({u(rng), u(rng)});
    const auto set = generate_candidates({u(rng), u(rng)}, 0.3, 72);
    const double b = w(rng), g = w(rng), s = scale(rng);
    EXPECT_EQ(select_goal(set, neighbors, logged, {b, g, 2}).index,
              select_goal(set, neighbors, logged, {b * s, g * s, 2}).index);
  }
}

TEST(VelocityToward, Examples) {
  const Vec2 v = velocity_toward({0, 0}, {1, 0}, 0.1);
  EXPECT_NEAR(v.x, 0.1, 1e-15);
  EXPECT_EQ(v.y, 0.0);
  EXPECT_EQ(velocity_toward({0, 0}, {0, 0}, 0.1), (Vec2{0, 0}));
  const Vec2 w = velocity_toward({0, 0}, {0.3, 0.4}, 0.05);
  EXPECT_NEAR(w.x, 0.03, 1e-15);
  EXPECT_NEAR(w.y, 0.04, 1e-15);
  // Within the reach tolerance counts as arrived.
  EXPECT_EQ(velocity_toward({0, 0}, {0.005, 0}, 0.1, 0.01), (Vec2{0, 0}));
}
