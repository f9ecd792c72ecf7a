// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#include "sfm.hpp"

#include <algorithm>
#include <cmath>

namespace crowdbench {

Vec2 desired_velocity(const Vec2 &position, const Vec2 &goal, double speed, double dt) {
  const Vec2 to_goal = goal - position;
  const double dist = norm(to_goal);
  if (dist <= 0.0) {
    return {};
  }
  return to_goal * (std::min(speed, dist / dt) / dist);
}

Vec2 sfm_repulsion(const AgentKinematics &self, const AgentKinematics &other, const SfmParams &params) {
  const Vec2 away = self.position - other.position;
  const double d = norm(away);
  if (d <= 0.0) {
    return {};
  }
  const double magnitude = params.A * std::exp((self.radius + other.radius - d) / params.B);
  return away * (magnitude / d);
}

Vec2 sfm_velocity(const AgentKinematics &self, std::span<const AgentKinematics> neighbors,
                  const SfmParams &params, const Vec2 &desired, double dt) {
  Vec2 force = (desired - self.velocity) / params.relaxation_time;
  const double range_sq = params.neighbor_dist * params.neighbor_dist;
  for (const auto &other : neighbors) {
    if (abs_sq(other.position - self.position) < range_sq) {
      force += sfm_repulsion(self, other, params);
    }
  }
  return clamp_length(self.velocity + dt * force, params.max_speed);
}

}  // namespace crowdbench
