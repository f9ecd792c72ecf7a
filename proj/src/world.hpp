// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors
//
// Circle-crossing crowd world: a holonomic robot among ORCA or social-force
// pedestrians, stepped with constant velocities over fixed dt.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "orca.hpp"
#include "rng.hpp"
#include "scoring.hpp"
#include "sfm.hpp"
#include "trajmetric.hpp"

namespace crowdbench {

enum class HumanPolicy { Orca, Sfm };

struct RobotState {
  Vec2 position;
  Vec2 velocity;
  Vec2 goal;
  double v_max{1.0};
  double theta{0.0};
  double radius{0.3};
};

struct HumanAgent {
  Vec2 position;
  Vec2 velocity;
  Vec2 goal;
  double pref_speed{1.0};
  double radius{0.3};
  HumanPolicy policy{HumanPolicy::Orca};
};

struct ObservedHuman {
  std::size_t id{0};  // index into the world's humans; not part of the wire format
  Vec2 position;
  double radius{0.3};
};

struct Observation {
  RobotState robot;
  std::vector<ObservedHuman> humans;
  double time{0.0};
};

struct ShapingConfig {
  bool enabled{true};
  double lambda{1.0};
  double tau_c{0.5};
  double w_smooth{0.2};
};

/// Human ORCA defaults. The small clearance absorbs the grazing contacts the
/// LP fallback otherwise allows between agents already touching.
inline OrcaParams human_orca_defaults() {
  OrcaParams p;
  p.safety_margin = 0.02;
  return p;
}

struct ScenarioConfig {
  DensityPreset density_preset{DensityPreset::Low};
  std::size_t n_humans{5};
  double circle_radius{4.0};
  double dt{0.25};
  double time_limit{30.0};
  double sensing_range{5.0};
  Point2 robot_start{0.0, -4.0};
  Point2 robot_goal{0.0, 4.0};
  double v_max{1.0};
  double robot_radius{0.3};
  double human_radius{0.3};
  double human_pref_speed{1.0};
  double goal_switch_prob{0.005};
  bool invisible_robot{true};
  ShapingConfig shaping{};

  HumanPolicy human_policy{HumanPolicy::Orca};
  OrcaParams human_orca{human_orca_defaults()};
  SfmParams human_sfm{};
  /// Half-width of the uniform per-axis jitter applied to spawn positions (m).
  double spawn_perturbation{0.5};
  /// Extra surface clearance required between spawn positions and goals (m).
  double spawn_margin{0.2};
  double discomfort_dist{0.5};
  /// Use the closed-form constant-velocity minimum over each step instead of
  /// the interval endpoints.
  bool continuous_separation{false};
  double eps_len{1e-6};

  static ScenarioConfig preset(DensityPreset preset);
  /// Straight-line start-to-goal time at full speed.
  double optimal_time() const { return distance(robot_start, robot_goal) / v_max; }
  void validate() const;
};

enum class Terminal { None, Goal, Collision, Timeout };

const char *terminal_name(Terminal t);

struct StepOutcome {
  Observation observation;
  double reward_base{0.0};
  double reward_shaping{0.0};
  double reward_total{0.0};
  double d_min{std::numeric_limits<double>::infinity()};
  Terminal terminal{Terminal::None};
};

/// Reward before shaping: collision, then goal, then the proximity band
/// [0, 0.2), else 0.
double base_reward(double d_t, bool reached_goal);

/// Surface separation between the robot and the nearest human; +inf when
/// there are no humans.
double min_separation(const RobotState &robot, const std::vector<HumanAgent> &humans);

/// Closest approach between two discs moving at constant velocity over
/// [0, dt], as surface separation.
double min_separation_over_step(const Vec2 &p_a, const Vec2 &v_a, double r_a, const Vec2 &p_b,
                                const Vec2 &v_b, double r_b, double dt);

class World {
 public:
  /// Throws Error{PlacementFailure} if rejection sampling needs more than
  /// 10,000 draws.
  static World generate(const ScenarioConfig &cfg, std::uint64_t seed);

  /// Advances robot and humans by one dt. Throws
  /// Error{SteppedTerminalEpisode} once a terminal state has been reached.
  StepOutcome step(const Vec2 &action);

  /// Advances the humans only, as if no robot were present.
  void advance_humans_only();

  Observation observe() const;

  const ScenarioConfig &config() const { return cfg_; }
  const RobotState &robot() const { return robot_; }
  const std::vector<HumanAgent> &humans() const { return humans_; }
  const std::vector<Point2> &robot_path() const { return robot_path_; }
  double time() const { return time_; }
  std::size_t steps() const { return steps_; }
  Terminal terminal() const { return terminal_; }

  /// Smallest surface separation between any two humans.
  double min_human_separation() const;

  /// Test hooks.
  HumanAgent &mutable_human(std::size_t i) { return humans_.at(i); }
  RobotState &mutable_robot() { return robot_; }

 private:
  World(ScenarioConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)), rng_(seed) {}

  void move_humans(bool robot_visible);
  Point2 random_circle_point();

  ScenarioConfig cfg_;
  RobotState robot_;
  std::vector<HumanAgent> humans_;
  Rng rng_;
  std::vector<Point2> robot_path_;
  double time_{0.0};
  std::size_t steps_{0};
  Terminal terminal_{Terminal::None};
};

/// Goal-handling hooks, exposed for testing: on arrival (distance < radius)
/// a fresh goal is drawn on the scenario circle; otherwise, with probability
/// `p`, the goal is redrawn anyway. Returns true when the goal changed.
bool reassign_goal(HumanAgent &human, Rng &rng, double circle_radius);
bool maybe_switch_goal(HumanAgent &human, Rng &rng, double p, double circle_radius);

}  // namespace crowdbench
