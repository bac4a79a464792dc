#include "touchmap/comms.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "touchmap/errors.hpp"

namespace touchmap {

std::vector<Vec2> NeighborSnapshot::positions() const {
  std::vector<Vec2> out;
  out.reserve(neighbors.size());
  for (const auto& n : neighbors) out.push_back(n.position);
  return out;
}

NeighborSnapshot neighbor_set(std::span<const RobotPosition> all_positions, int observer_id, double r_comm,
                              std::int64_t step) {
  if (!(r_comm > 0.0)) throw InvalidParam(fmt::format("r_comm must be positive, got {}", r_comm));
  const auto self = std::find_if(all_positions.begin(), all_positions.end(),
                                 [observer_id](const RobotPosition& r) { return r.id == observer_id; });
  if (self == all_positions.end()) throw UnknownObserver(fmt::format("robot {} is not in the table", observer_id));

  NeighborSnapshot snap{observer_id, {}, step};
  for (const auto& r : all_positions) {
    if (r.id == observer_id) continue;
    if (euclidean(self->position, r.position) <= r_comm) snap.neighbors.push_back(r);
  }
  std::sort(snap.neighbors.begin(), snap.neighbors.end(),
            [](const RobotPosition& a, const RobotPosition& b) { return a.id < b.id; });
  return snap;
}

bool is_fully_connected(std::span<const RobotPosition> all_positions, double r_comm) {
  const std::size_t n = all_positions.size();
  if (n <= 1) return true;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      if (seen[j] || euclidean(all_positions[i].position, all_positions[j].position) > r_comm) continue;
      seen[j] = true;
      ++reached;
      stack.push_back(j);
    }
  }
  return reached == n;
}

}  // namespace touchmap
