// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#include "world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "errors.hpp"

namespace crowdbench {

namespace {

constexpr std::size_t kMaxPlacementAttempts = 10'000;
constexpr double kHeadingSpeedEps = 1e-6;

std::vector<AgentKinematics> neighbors_of(const std::vector<HumanAgent> &humans, std::size_t self,
                                          const RobotState *robot) {
  std::vector<AgentKinematics> out;
  out.reserve(humans.size());
  for (std::size_t j = 0; j < humans.size(); ++j) {
    if (j != self) {
      out.push_back({humans[j].position, humans[j].velocity, humans[j].radius});
    }
  }
  if (robot != nullptr) {
    out.push_back({robot->position, robot->velocity, robot->radius});
  }
  return out;
}

}  // namespace

const char *terminal_name(Terminal t) {
  switch (t) {
    case Terminal::None: return "none";
    case Terminal::Goal: return "goal";
    case Terminal::Collision: return "collision";
    case Terminal::Timeout: return "timeout";
  }
  return "none";
}

ScenarioConfig ScenarioConfig::preset(DensityPreset preset) {
  ScenarioConfig cfg;
  cfg.density_preset = preset;
  if (preset == DensityPreset::High) {
    cfg.n_humans = 20;
    cfg.circle_radius = 6.0;
  }
  return cfg;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string &msg) { throw Error(ErrorCode::Config, msg); };
  if (!(dt > 0.0)) fail("dt must be > 0");
  if (!(time_limit > 0.0)) fail("time_limit must be > 0");
  if (!(circle_radius > 0.0)) fail("circle_radius must be > 0");
  if (!(v_max > 0.0)) fail("v_max must be > 0");
  if (!(robot_radius > 0.0) || !(human_radius > 0.0)) fail("radii must be > 0");
  if (!(human_pref_speed > 0.0)) fail("human_pref_speed must be > 0");
  if (!(sensing_range >= 0.0)) fail("sensing_range must be >= 0");
  if (!(goal_switch_prob >= 0.0 && goal_switch_prob <= 1.0)) fail("goal_switch_prob must be in [0,1]");
  if (!(spawn_perturbation >= 0.0) || !(spawn_margin >= 0.0)) fail("spawn jitter and margin must be >= 0");
  if (!(eps_len > 0.0)) fail("eps_len must be > 0");
  if (shaping.enabled) {
    if (!(shaping.lambda > 0.0)) fail("shaping.lambda must be > 0");
    if (!(shaping.tau_c >= 0.0 && shaping.tau_c < 1.0)) fail("shaping.tau_c must be in [0,1)");
    if (!(shaping.w_smooth >= 0.0)) fail("shaping.w_smooth must be >= 0");
  }
  if (!(human_orca.time_horizon > 0.0) || !(human_orca.neighbor_dist > 0.0)) {
    fail("human ORCA time_horizon and neighbor_dist must be > 0");
  }
  if (!(human_sfm.relaxation_time > 0.0) || !(human_sfm.B > 0.0)) {
    fail("human SFM relaxation_time and B must be > 0");
  }
  if (!is_finite(robot_start) || !is_finite(robot_goal)) fail("robot start/goal must be finite");
}

double base_reward(double d_t, bool reached_goal) {
  if (d_t < 0.0) {
    return -0.25;
  }
  if (reached_goal) {
    return 1.0;
  }
  if (d_t < 0.2) {
    return -0.1 + d_t / 2.0;
  }
  return 0.0;
}

double min_separation(const RobotState &robot, const std::vector<HumanAgent> &humans) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto &h : humans) {
    best = std::min(best, distance(robot.position, h.position) - h.radius - robot.radius);
  }
  return best;
}

double min_separation_over_step(const Vec2 &p_a, const Vec2 &v_a, double r_a, const Vec2 &p_b,
                                const Vec2 &v_b, double r_b, double dt) {
  const Vec2 rel_p = p_b - p_a;
  const Vec2 rel_v = v_b - v_a;
  const double vv = abs_sq(rel_v);
  double t = 0.0;
  if (vv > 0.0) {
    t = std::clamp(-dot(rel_p, rel_v) / vv, 0.0, dt);
  }
  return norm(rel_p + t * rel_v) - r_a - r_b;
}

bool reassign_goal(HumanAgent &human, Rng &rng, double circle_radius) {
  const double angle = rng.uniform() * 2.0 * std::numbers::pi;
  human.goal = {circle_radius * std::cos(angle), circle_radius * std::sin(angle)};
  return true;
}

bool maybe_switch_goal(HumanAgent &human, Rng &rng, double p, double circle_radius) {
  if (distance(human.position, human.goal) < human.radius) {
    return reassign_goal(human, rng, circle_radius);
  }
  if (p > 0.0 && rng.uniform() < p) {
    return reassign_goal(human, rng, circle_radius);
  }
  return false;
}

Point2 World::random_circle_point() {
  const double angle = rng_.uniform() * 2.0 * std::numbers::pi;
  const double jx = rng_.uniform(-cfg_.spawn_perturbation, cfg_.spawn_perturbation);
  const double jy = rng_.uniform(-cfg_.spawn_perturbation, cfg_.spawn_perturbation);
  return {cfg_.circle_radius * std::cos(angle) + jx, cfg_.circle_radius * std::sin(angle) + jy};
}

World World::generate(const ScenarioConfig &cfg, std::uint64_t seed) {
  cfg.validate();
  World world(cfg, seed);

  world.robot_.position = cfg.robot_start;
  world.robot_.goal = cfg.robot_goal;
  world.robot_.v_max = cfg.v_max;
  world.robot_.radius = cfg.robot_radius;
  const Vec2 heading = cfg.robot_goal - cfg.robot_start;
  world.robot_.theta = std::atan2(heading.y, heading.x);

  std::size_t attempts = 0;
  while (world.humans_.size() < cfg.n_humans) {
    if (++attempts > kMaxPlacementAttempts) {
      std::ostringstream os;
      os << "could not place " << cfg.n_humans << " humans on a circle of radius "
         << cfg.circle_radius << " within " << kMaxPlacementAttempts << " attempts";
      throw Error(ErrorCode::PlacementFailure, os.str());
    }
    HumanAgent h;
    h.position = world.random_circle_point();
    h.goal = -h.position;
    h.pref_speed = cfg.human_pref_speed;
    h.radius = cfg.human_radius;
    h.policy = cfg.human_policy;

    // Spawn and goal points must clear the robot's endpoints and every
    // earlier human's endpoints.
    auto clear = [&](const Vec2 &a, const Vec2 &b, double r) {
      return distance(a, b) > h.radius + r + cfg.spawn_margin;
    };
    bool ok = clear(h.position, cfg.robot_start, cfg.robot_radius) &&
              clear(h.position, cfg.robot_goal, cfg.robot_radius) &&
              clear(h.goal, cfg.robot_start, cfg.robot_radius) &&
              clear(h.goal, cfg.robot_goal, cfg.robot_radius);
    for (const auto &other : world.humans_) {
      if (!ok) break;
      ok = clear(h.position, other.position, other.radius) && clear(h.position, other.goal, other.radius) &&
           clear(h.goal, other.goal, other.radius) && clear(h.goal, other.position, other.radius);
    }
    if (ok) {
      world.humans_.push_back(h);
    }
  }

  world.robot_path_.push_back(world.robot_.position);
  return world;
}

void World::move_humans(bool robot_visible) {
  const RobotState *robot = robot_visible ? &robot_ : nullptr;

  // Velocities are chosen simultaneously from the pre-step state.
  std::vector<Vec2> next(humans_.size());
  for (std::size_t i = 0; i < humans_.size(); ++i) {
    const HumanAgent &h = humans_[i];
    const auto neighbors = neighbors_of(humans_, i, robot);
    const AgentKinematics self{h.position, h.velocity, h.radius};
    const Vec2 pref = desired_velocity(h.position, h.goal, h.pref_speed, cfg_.dt);
    if (h.policy == HumanPolicy::Orca) {
      OrcaParams params = cfg_.human_orca;
      params.max_speed = h.pref_speed;
      next[i] = orca_velocity(self, neighbors, params, pref, cfg_.dt);
    } else {
      SfmParams params = cfg_.human_sfm;
      params.max_speed = h.pref_speed;
      next[i] = sfm_velocity(self, neighbors, params, pref, cfg_.dt);
    }
  }

  for (std::size_t i = 0; i < humans_.size(); ++i) {
    humans_[i].velocity = next[i];
    humans_[i].position += next[i] * cfg_.dt;
  }
  for (auto &h : humans_) {
    maybe_switch_goal(h, rng_, cfg_.goal_switch_prob, cfg_.circle_radius);
  }
}

void World::advance_humans_only() {
  move_humans(false);
  time_ = static_cast<double>(++steps_) * cfg_.dt;
}

StepOutcome World::step(const Vec2 &action) {
  if (terminal_ != Terminal::None) {
    throw Error(ErrorCode::SteppedTerminalEpisode,
                std::string("step() called on a terminated episode (") + terminal_name(terminal_) + ")");
  }
  Vec2 command = is_finite(action) ? clamp_length(action, robot_.v_max) : Vec2{};

  const RobotState robot_before = robot_;
  const std::vector<HumanAgent> humans_before = humans_;

  move_humans(!cfg_.invisible_robot);

  robot_.velocity = command;
  robot_.position += command * cfg_.dt;
  if (norm(command) > kHeadingSpeedEps) {
    robot_.theta = std::atan2(command.y, command.x);
  }
  time_ = static_cast<double>(++steps_) * cfg_.dt;
  robot_path_.push_back(robot_.position);

  StepOutcome out;
  if (cfg_.continuous_separation) {
    for (std::size_t i = 0; i < humans_.size(); ++i) {
      out.d_min = std::min(out.d_min, min_separation_over_step(
                                          robot_before.position, robot_.velocity, robot_.radius,
                                          humans_before[i].position, humans_[i].velocity,
                                          humans_[i].radius, cfg_.dt));
    }
  } else {
    out.d_min = std::min(min_separation(robot_before, humans_before), min_separation(robot_, humans_));
  }

  const bool reached_goal = distance(robot_.position, robot_.goal) < robot_.radius;
  if (out.d_min < 0.0) {
    terminal_ = Terminal::Collision;
  } else if (reached_goal) {
    terminal_ = Terminal::Goal;
  } else if (time_ >= cfg_.time_limit - 1e-9) {
    terminal_ = Terminal::Timeout;
  }
  out.terminal = terminal_;

  out.reward_base = base_reward(out.d_min, reached_goal);
  if (cfg_.shaping.enabled && robot_path_.size() >= 4) {
    const std::size_t n = robot_path_.size();
    const auto k1 = circumcircle_curvature_checked(robot_path_[n - 4], robot_path_[n - 3],
                                                   robot_path_[n - 2], cfg_.eps_len);
    const auto k2 = circumcircle_curvature_checked(robot_path_[n - 3], robot_path_[n - 2],
                                                   robot_path_[n - 1], cfg_.eps_len);
    if (!k1.degenerate && !k2.degenerate) {
      const double penalty =
          smoothness_penalty(k2.kappa - k1.kappa, cfg_.shaping.lambda, cfg_.shaping.tau_c);
      if (penalty > 0.0) {
        out.reward_shaping = -cfg_.shaping.w_smooth * penalty;
      }
    }
  }
  out.reward_total = out.reward_base + out.reward_shaping;
  out.observation = observe();
  return out;
}

Observation World::observe() const {
  Observation obs;
  obs.robot = robot_;
  obs.time = time_;
  for (std::size_t i = 0; i < humans_.size(); ++i) {
    if (distance(humans_[i].position, robot_.position) <= cfg_.sensing_range) {
      obs.humans.push_back({i, humans_[i].position, humans_[i].radius});
    }
  }
  return obs;
}

double World::min_human_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < humans_.size(); ++i) {
    for (std::size_t j = i + 1; j < humans_.size(); ++j) {
      best = std::min(best, distance(humans_[i].position, humans_[j].position) - humans_[i].radius -
                                humans_[j].radius);
    }
  }
  return best;
}

}  // namespace crowdbench
