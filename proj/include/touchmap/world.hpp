#pragma once

#include <cstddef>
#include <vector>

#include "touchmap/geometry.hpp"

namespace touchmap {

/// Bounded rectangular workspace with static obstacles. Immutable once a
/// scenario has been loaded.
struct World {
  AxisAlignedRect bounds;
  std::vector<Shape> obstacles;
  bool walls_are_tactile{true};
};

/// Which surface produced a tactile contact.
struct ContactSource {
  enum class Kind { Obstacle, Wall };
  Kind kind{Kind::Wall};
  std::size_t obstacle_index{0};  // meaningful only for Kind::Obstacle

  bool operator==(const ContactSource&) const = default;
};

struct ContactQueryResult {
  bool in_contact{false};
  Vec2 contact_point;  // defined iff in_contact
  ContactSource source;
};

/// Throws InvalidParam unless the bounds are a proper rectangle, every
/// obstacle is a valid shape, and every obstacle touches the bounds.
void validate_world(const World& w);

/// Tactile sensing: fires when an obstacle surface (or a wall, if walls are
/// tactile) is within robot_radius + tactile_range of the robot center. The
/// closest surface wins; ties go to the lowest obstacle index, walls last.
/// Throws OutOfBounds if robot_center is outside the workspace.
ContactQueryResult contact_query(Vec2 robot_center, double robot_radius, double tactile_range, const World& w);

/// Nearest point to p at which a disc of robot_radius lies fully in bounds.
Vec2 clamp_to_bounds(Vec2 p, double robot_radius, const World& w);

/// Pushes a robot disc out of any obstacle it overlaps along the surface
/// normal, then clamps it to bounds. Robots may touch surfaces but never
/// penetrate them.
Vec2 resolve_penetration(Vec2 p, double robot_radius, const World& w);

/// Smallest distance from p to any wall of the workspace, and the foot of
/// that perpendicular. Ties resolve in the order x-min, x-max, y-min, y-max.
struct WallProximity {
  double distance;
  Vec2 point;
};
WallProximity nearest_wall(Vec2 p, const World& w);

/// True when a disc centered at p is inside bounds and clear of obstacles.
bool disc_is_free(Vec2 p, double robot_radius, const World& w);

}  // namespace touchmap
