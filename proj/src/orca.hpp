// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors
//
// Optimal reciprocal collision avoidance for disc agents: half-plane
// construction and the incremental 2D/3D linear programs that pick the
// velocity closest to the preferred one.

#pragma once

#include <span>
#include <vector>

#include "geometry.hpp"

namespace crowdbench {

struct AgentKinematics {
  Vec2 position;
  Vec2 velocity;
  double radius{0.3};
};

struct OrcaParams {
  double time_horizon{5.0};   // s
  double neighbor_dist{10.0};  // m, centre distance
  double max_speed{1.0};      // m/s
  /// Share of each pairwise correction this agent applies: 0.5 when the
  /// neighbour reciprocates, 1.0 when it does not react.
  double responsibility{0.5};
  /// Extra clearance added to every combined radius.
  double safety_margin{0.0};
};

/// Half-plane of admissible velocities: the region left of `direction`
/// through `point`.
struct OrcaLine {
  Vec2 point;
  Vec2 direction;
};

/// Builds one constraint per neighbour within neighbor_dist. Neighbours are
/// ordered by distance (stable, so equal distances keep input order).
std::vector<OrcaLine> orca_lines(const AgentKinematics &self,
                                 std::span<const AgentKinematics> neighbors,
                                 const OrcaParams &params, double dt);

/// Closest velocity to pref_vel inside every half-plane and the max_speed
/// disc. When the half-planes have no common point inside the disc, returns
/// the velocity minimising the largest violation instead.
Vec2 solve_orca_lp(std::span<const OrcaLine> lines, double max_speed, const Vec2 &pref_vel);

/// Signed violation of a half-plane by v (positive means outside).
inline double orca_violation(const OrcaLine &line, const Vec2 &v) {
  return det(line.direction, line.point - v);
}

Vec2 orca_velocity(const AgentKinematics &self, std::span<const AgentKinematics> neighbors,
                   const OrcaParams &params, const Vec2 &pref_vel, double dt);

}  // namespace crowdbench
