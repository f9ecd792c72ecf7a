// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#include "orca.hpp"

#include <algorithm>
#include <cmath>

namespace crowdbench {
namespace {

constexpr double kEpsilon = 1e-9;

// 1D program along line `line_no`, bounded by the disc and lines [0, line_no).
bool linear_program_1(std::span<const OrcaLine> lines, std::size_t line_no, double radius,
                      const Vec2 &opt_velocity, bool direction_opt, Vec2 &result) {
  const OrcaLine &line = lines[line_no];
  const double dot_product = dot(line.point, line.direction);
  const double discriminant = dot_product * dot_product + radius * radius - abs_sq(line.point);

  if (discriminant < 0.0) {
    // Speed disc lies entirely outside this half-plane.
    return false;
  }

  const double sqrt_disc = std::sqrt(discriminant);
  double t_left = -dot_product - sqrt_disc;
  double t_right = -dot_product + sqrt_disc;

  for (std::size_t i = 0; i < line_no; ++i) {
    const double denominator = det(line.direction, lines[i].direction);
    const double numerator = det(lines[i].direction, line.point - lines[i].point);

    if (std::abs(denominator) <= kEpsilon) {
      // Parallel lines.
      if (numerator < 0.0) {
        return false;
      }
      continue;
    }

    const double t = numerator / denominator;
    if (denominator >= 0.0) {
      t_right = std::min(t_right, t);
    } else {
      t_left = std::max(t_left, t);
    }
    if (t_left > t_right) {
      return false;
    }
  }

  if (direction_opt) {
    result = dot(opt_velocity, line.direction) > 0.0 ? line.point + t_right * line.direction
                                                      : line.point + t_left * line.direction;
  } else {
    const double t = dot(line.direction, opt_velocity - line.point);
    result = line.point + std::clamp(t, t_left, t_right) * line.direction;
  }
  return true;
}

// Returns the index of the first line that could not be satisfied, or
// lines.size() on success.
std::size_t linear_program_2(std::span<const OrcaLine> lines, double radius,
                             const Vec2 &opt_velocity, bool direction_opt, Vec2 &result) {
  if (direction_opt) {
    // opt_velocity is a unit vector here.
    result = opt_velocity * radius;
  } else if (abs_sq(opt_velocity) > radius * radius) {
    result = normalized(opt_velocity) * radius;
  } else {
    result = opt_velocity;
  }

  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (orca_violation(lines[i], result) > 0.0) {
      const Vec2 previous = result;
      if (!linear_program_1(lines, i, radius, opt_velocity, direction_opt, result)) {
        result = previous;
        return i;
      }
    }
  }
  return lines.size();
}

// Minimises the maximum violation over lines [begin_line, end).
void linear_program_3(std::span<const OrcaLine> lines, std::size_t begin_line, double radius,
                      Vec2 &result) {
  double distance = 0.0;

  for (std::size_t i = begin_line; i < lines.size(); ++i) {
    if (orca_violation(lines[i], result) <= distance) {
      continue;
    }
    std::vector<OrcaLine> projected;
    projected.reserve(i);

    for (std::size_t j = 0; j < i; ++j) {
      OrcaLine line;
      const double determinant = det(lines[i].direction, lines[j].direction);

      if (std::abs(determinant) <= kEpsilon) {
        if (dot(lines[i].direction, lines[j].direction) > 0.0) {
          // Same orientation; j adds nothing beyond i.
          continue;
        }
        line.point = 0.5 * (lines[i].point + lines[j].point);
      } else {
        line.point = lines[i].point +
                     (det(lines[j].direction, lines[i].point - lines[j].point) / determinant) *
                         lines[i].direction;
      }
      line.direction = normalized(lines[j].direction - lines[i].direction);
      projected.push_back(line);
    }

    const Vec2 previous = result;
    const Vec2 outward{-lines[i].direction.y, lines[i].direction.x};
    if (linear_program_2(projected, radius, outward, true, result) < projected.size()) {
      // Only reachable through round-off; the previous result is already optimal.
      result = previous;
    }
    distance = orca_violation(lines[i], result);
  }
}

}  // namespace

std::vector<OrcaLine> orca_lines(const AgentKinematics &self,
                                 std::span<const AgentKinematics> neighbors,
                                 const OrcaParams &params, double dt) {
  const double range_sq = params.neighbor_dist * params.neighbor_dist;
  std::vector<std::size_t> order;
  std::vector<double> dist_sq(neighbors.size());
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    dist_sq[i] = abs_sq(neighbors[i].position - self.position);
    if (dist_sq[i] < range_sq) {
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist_sq[a] < dist_sq[b]; });

  const double inv_time_horizon = 1.0 / params.time_horizon;
  std::vector<OrcaLine> lines;
  lines.reserve(order.size());

  for (std::size_t idx : order) {
    const AgentKinematics &other = neighbors[idx];
    const Vec2 relative_position = other.position - self.position;
    const Vec2 relative_velocity = self.velocity - other.velocity;
    const double d_sq = abs_sq(relative_position);
    const double combined_radius = self.radius + other.radius + params.safety_margin;
    const double combined_radius_sq = combined_radius * combined_radius;

    OrcaLine line;
    Vec2 u;

    if (d_sq > combined_radius_sq) {
      // Vector from the truncation-disc centre to the relative velocity.
      const Vec2 w = relative_velocity - inv_time_horizon * relative_position;
      const double w_length_sq = abs_sq(w);
      const double dot_product = dot(w, relative_position);

      if (dot_product < 0.0 && dot_product * dot_product > combined_radius_sq * w_length_sq) {
        // Closest boundary point is on the truncation arc.
        const double w_length = std::sqrt(w_length_sq);
        const Vec2 unit_w = w / w_length;
        line.direction = Vec2(unit_w.y, -unit_w.x);
        u = (combined_radius * inv_time_horizon - w_length) * unit_w;
      } else {
        // Closest boundary point is on one of the cone legs. An exact tie
        // (w on the cone axis) resolves to the right leg.
        const double leg = std::sqrt(d_sq - combined_radius_sq);
        if (det(relative_position, w) > 0.0) {
          line.direction = Vec2(relative_position.x * leg - relative_position.y * combined_radius,
                                relative_position.x * combined_radius + relative_position.y * leg) /
                           d_sq;
        } else {
          line.direction = -Vec2(relative_position.x * leg + relative_position.y * combined_radius,
                                 -relative_position.x * combined_radius + relative_position.y * leg) /
                           d_sq;
        }
        u = dot(relative_velocity, line.direction) * line.direction - relative_velocity;
      }
    } else {
      // Already overlapping: resolve within one time step.
      const double inv_dt = 1.0 / dt;
      const Vec2 w = relative_velocity - inv_dt * relative_position;
      const double w_length = norm(w);
      const Vec2 unit_w = w_length > 0.0 ? w / w_length : Vec2(1.0, 0.0);
      line.direction = Vec2(unit_w.y, -unit_w.x);
      u = (combined_radius * inv_dt - w_length) * unit_w;
    }

    line.point = self.velocity + params.responsibility * u;
    lines.push_back(line);
  }
  return lines;
}

Vec2 solve_orca_lp(std::span<const OrcaLine> lines, double max_speed, const Vec2 &pref_vel) {
  Vec2 result;
  const std::size_t failed = linear_program_2(lines, max_speed, pref_vel, false, result);
  if (failed < lines.size()) {
    linear_program_3(lines, failed, max_speed, result);
  }
  return clamp_length(result, max_speed);
}

Vec2 orca_velocity(const AgentKinematics &self, std::span<const AgentKinematics> neighbors,
                   const OrcaParams &params, const Vec2 &pref_vel, double dt) {
  const auto lines = orca_lines(self, neighbors, params, dt);
  return solve_orca_lp(lines, params.max_speed, pref_vel);
}

}  // namespace crowdbench
