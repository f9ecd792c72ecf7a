// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#pragma once

#include <span>

#include "geometry.hpp"
#include "orca.hpp"

namespace crowdbench {

struct SfmParams {
  double relaxation_time{0.5};  // s
  double A{2.0};                // repulsion scale
  double B{0.3};                // m, repulsion range
  double neighbor_dist{10.0};   // m
  double max_speed{1.0};        // m/s
};

/// Velocity toward `goal` at `speed`, shortened so one step of length dt
/// does not pass the goal. Zero at the goal.
Vec2 desired_velocity(const Vec2 &position, const Vec2 &goal, double speed, double dt);

/// Exponential repulsion exerted on `self` by one neighbour.
Vec2 sfm_repulsion(const AgentKinematics &self, const AgentKinematics &other, const SfmParams &params);

/// One explicit Euler step of the social-force dynamics (unit mass):
/// v' = clamp(v + dt (f_goal + sum f_rep), max_speed), f_goal = (v_des - v) / relaxation_time.
Vec2 sfm_velocity(const AgentKinematics &self, std::span<const AgentKinematics> neighbors,
                  const SfmParams &params, const Vec2 &desired, double dt);

}  // namespace crowdbench
