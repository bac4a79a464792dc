#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "touchmap/geometry.hpp"

namespace touchmap {

struct RobotPosition {
  int id{0};
  Vec2 position;
};

/// What one robot can see of its peers at a decision instant: every other
/// robot within r_comm (inclusive), sorted by id. Communication is ideal
/// inside the range and absent outside it.
struct NeighborSnapshot {
  int observer_id{0};
  std::vector<RobotPosition> neighbors;
  std::int64_t taken_at_step{0};

  std::vector<Vec2> positions() const;
};

/// Throws UnknownObserver if observer_id is absent, InvalidParam if
/// r_comm <= 0.
NeighborSnapshot neighbor_set(std::span<const RobotPosition> all_positions, int observer_id, double r_comm,
                              std::int64_t step = 0);

/// True iff the r_comm disk graph over all robots has a single component.
bool is_fully_connected(std::span<const RobotPosition> all_positions, double r_comm);

}  // namespace touchmap
