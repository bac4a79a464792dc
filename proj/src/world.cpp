#include "touchmap/world.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>

#include "touchmap/errors.hpp"

namespace touchmap {

void validate_world(const World& w) {
  validate_shape(w.bounds);
  for (std::size_t i = 0; i < w.obstacles.size(); ++i) {
    try {
      validate_shape(w.obstacles[i]);
    } catch (const InvalidParam& e) {
      throw InvalidParam(fmt::format("obstacle {}: {}", i, e.what()));
    }
    if (!shape_intersects_rect(w.obstacles[i], w.bounds))
      throw InvalidParam(fmt::format("obstacle {} lies entirely outside the workspace", i));
  }
}

WallProximity nearest_wall(Vec2 p, const World& w) {
  const auto& b = w.bounds;
  const std::array<WallProximity, 4> walls{{
      {p.x - b.min.x, {b.min.x, p.y}},
      {b.max.x - p.x, {b.max.x, p.y}},
      {p.y - b.min.y, {p.x, b.min.y}},
      {b.max.y - p.y, {p.x, b.max.y}},
  }};
  return *std::min_element(walls.begin(), walls.end(),
                           [](const WallProximity& a, const WallProximity& c) { return a.distance < c.distance; });
}

ContactQueryResult contact_query(Vec2 robot_center, double robot_radius, double tactile_range, const World& w) {
  const auto& b = w.bounds;
  if (!(robot_center.x >= b.min.x && robot_center.x <= b.max.x && robot_center.y >= b.min.y &&
        robot_center.y <= b.max.y))
    throw OutOfBounds(fmt::format("robot center ({}, {}) is outside the workspace", robot_center.x, robot_center.y));

  const double reach = robot_radius + tactile_range;
  ContactQueryResult result;
  double best = reach;
  for (std::size_t i = 0; i < w.obstacles.size(); ++i) {
    const double d = distance_point_to_shape(robot_center, w.obstacles[i]);
    // Strict improvement keeps the lowest index on ties.
    if (d <= reach && (!result.in_contact || d < best)) {
      best = d;
      result.in_contact = true;
      result.contact_point = nearest_boundary_point(robot_center, w.obstacles[i]);
      result.source = {ContactSource::Kind::Obstacle, i};
    }
  }
  if (w.walls_are_tactile) {
    const WallProximity wall = nearest_wall(robot_center, w);
    if (wall.distance <= reach && (!result.in_contact || wall.distance < best)) {
      result.in_contact = true;
      result.contact_point = wall.point;
      result.source = {ContactSource::Kind::Wall, 0};
    }
  }
  return result;
}

Vec2 clamp_to_bounds(Vec2 p, double robot_radius, const World& w) {
  const auto& b = w.bounds;
  return {std::clamp(p.x, b.min.x + robot_radius, b.max.x - robot_radius),
          std::clamp(p.y, b.min.y + robot_radius, b.max.y - robot_radius)};
}

Vec2 resolve_penetration(Vec2 p, double robot_radius, const World& w) {
  // A few passes settle discs wedged between adjacent obstacles.
  for (int pass = 0; pass < 4; ++pass) {
    bool moved = false;
    for (const Shape& s : w.obstacles) {
      const double d = distance_point_to_shape(p, s);
      if (d >= robot_radius) continue;
      const Vec2 surface = nearest_boundary_point(p, s);
      Vec2 normal = d < 0.0 ? (surface - p).normalized() : (p - surface).normalized();
      if (normal == Vec2{}) normal = {1.0, 0.0};
      p = surface + normal * robot_radius;
      moved = true;
    }
    p = clamp_to_bounds(p, robot_radius, w);
    if (!moved) break;
  }
  return p;
}

bool disc_is_free(Vec2 p, double robot_radius, const World& w) {
  const auto& b = w.bounds;
  if (p.x - robot_radius < b.min.x || p.x + robot_radius > b.max.x || p.y - robot_radius < b.min.y ||
      p.y + robot_radius > b.max.y)
    return false;
  return std::none_of(w.obstacles.begin(), w.obstacles.end(),
                      [&](const Shape& s) { return distance_point_to_shape(p, s) < robot_radius; });
}

}  // namespace touchmap
