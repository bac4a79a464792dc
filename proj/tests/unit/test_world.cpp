#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "touchmap/errors.hpp"
#include "touchmap/world.hpp"

using namespace touchmap;

namespace {

World arena(std::vector<Shape> obstacles = {}, bool tactile_walls = true) {
  return World{{{-0.75, -0.75}, {0.75, 0.75}}, std::move(obstacles), tactile_walls};
}

}  // namespace

TEST(ContactQuery, NearbyCircleObstacle) {
  const World w = arena({Circle{{0.55, 0.0}, 0.01}});
  const auto c = contact_query({0.5, 0.0}, 0.037, 0.005, w);
  ASSERT_TRUE(c.in_contact);
  EXPECT_EQ(c.source.kind, ContactSource::Kind::Obstacle);
  EXPECT_EQ(c.source.obstacle_index, 0u);
  EXPECT_NEAR(c.contact_point.x, 0.54, 1e-12);
  EXPECT_NEAR(c.contact_point.y, 0.0, 1e-12);
}

TEST(ContactQuery, CenterOfEmptyArenaIsFree) {
  EXPECT_FALSE(contact_query({0.0, 0.0}, 0.037, 0.005, arena()).in_contact);
}

TEST(ContactQuery, WallContact) {
  const auto c = contact_query({0.712, 0.0}, 0.037, 0.005, arena());
  ASSERT_TRUE(c.in_contact);
  EXPECT_EQ(c.source.kind, ContactSource::Kind::Wall);
  EXPECT_NEAR(c.contact_point.x, 0.75, 1e-12);
  EXPECT_NEAR(c.contact_point.y, 0.0, 1e-12);
}

TEST(ContactQuery, TiesPreferLowestObstacleThenWall) {
  // Two identical obstacles, and a wall at the same gap.
  const World w = arena({Circle{{0.0, 0.1}, 0.06}, Circle{{0.0, 0.1}, 0.06}});
  const auto c = contact_query({0.0, 0.0}, 0.037, 0.005, w);
  ASSERT_TRUE(c.in_contact);
  EXPECT_EQ(c.source, (ContactSource{ContactSource::Kind::Obstacle, 0}));

  // Exact tie between an obstacle and a wall (dyadic values): the obstacle wins.
  const World w2{{{-1.0, -1.0}, {1.0, 1.0}}, {Circle{{0.0, 0.8125}, 0.0625}}, true};
  const auto c2 = contact_query({0.0, 0.9375}, 0.0625, 0.0, w2);
  ASSERT_TRUE(c2.in_contact);
  EXPECT_EQ(c2.source, (ContactSource{ContactSource::Kind::Obstacle, 0}));

  // A strictly closer wall beats a farther obstacle.
  const auto c3 = contact_query({0.0, 0.9375}, 0.0625, 0.01, World{{{-1, -1}, {1, 1}}, {Circle{{0.0, 0.8}, 0.0625}}, true});
  ASSERT_TRUE(c3.in_contact);
  EXPECT_EQ(c3.source.kind, ContactSource::Kind::Wall);
}

TEST(ContactQuery, OutOfBoundsIsAnError) {
  EXPECT_THROW(contact_query({0.9, 0.0}, 0.037, 0.005, arena()), OutOfBounds);
}

TEST(ContactQuery, NonTactileWallsNeverFireWithoutObstacles) {
  const World w = arena({}, false);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.713, 0.713);
  for (int i = 0; i < 1000; ++i) EXPECT_FALSE(contact_query({u(rng), u(rng)}, 0.037, 0.005, w).in_contact);
}

TEST(ContactQuery, MonotoneInRangeAndPointWithinReach) {
  const World w = arena({Circle{{0.1, 0.2}, 0.1}, AxisAlignedRect{{-0.4, -0.4}, {-0.2, -0.1}},
                         ConvexPolygon{{{0.3, -0.5}, {0.6, -0.4}, {0.4, -0.2}}}});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.713, 0.713);
  std::uniform_real_distribution<double> eps(0.0, 0.05);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 p{u(rng), u(rng)};
    const double e = eps(rng);
    const bool inside = std::ranges::any_of(w.obstacles, [&](const Shape& s) { return distance_point_to_shape(p, s) < 0; });
    const auto c = contact_query(p, 0.037, e, w);
    if (c.in_contact && !inside) {
      EXPECT_LE(euclidean(p, c.contact_point), 0.037 + e + 1e-9);
      EXPECT_TRUE(contact_query(p, 0.037, e + eps(rng), w).in_contact);
    }
  }
}

TEST(ClampToBounds, Examples) {
  const World w = arena();
  const Vec2 a = clamp_to_bounds({0.9, 0.0}, 0.037, w);
  EXPECT_NEAR(a.x, 0.713, 1e-12);
  EXPECT_EQ(a.y, 0.0);
  EXPECT_EQ(clamp_to_bounds({0.0, 0.0}, 0.037, w), (Vec2{0.0, 0.0}));
  const Vec2 c = clamp_to_bounds({0.9, 0.9}, 0.037, w);
  EXPECT_NEAR(c.x, 0.713, 1e-12);
  EXPECT_NEAR(c.y, 0.713, 1e-12);
}

TEST(ResolvePenetration, PushesDiscOntoSurface) {
  const World w = arena({Circle{{0.0, 0.0}, 0.1}});
  const Vec2 p = resolve_penetration({0.12, 0.0}, 0.037, w);
  EXPECT_NEAR(p.x, 0.137, 1e-12);
  EXPECT_NEAR(distance_point_to_shape(p, w.obstacles[0]), 0.037, 1e-12);
  // Clear positions are untouched.
  EXPECT_EQ(resolve_penetration({0.5, 0.5}, 0.037, w), (Vec2{0.5, 0.5}));
}

TEST(ValidateWorld, RejectsObstacleOutsideBounds) {
  EXPECT_THROW(validate_world(arena({Circle{{2.0, 2.0}, 0.1}})), InvalidParam);
  EXPECT_THROW(validate_world(arena({Circle{{0.0, 0.0}, -0.1}})), InvalidParam);
  EXPECT_NO_THROW(validate_world(arena({Circle{{0.8, 0.0}, 0.1}})));
}
