// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors
//
// Robot controllers: goal-greedy, ORCA and social-force baselines, and an
// external controller reached over newline-delimited JSON on stdin/stdout.

#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>

#include "orca.hpp"
#include "sfm.hpp"
#include "subprocess.hpp"
#include "world.hpp"

namespace crowdbench {

enum class PolicyKind { OrcaRobot, SfmRobot, GoalGreedy, External };

const char *policy_kind_name(PolicyKind kind);

/// Robot baselines run against humans that ignore them, so they take the
/// whole avoidance burden and keep a wider berth than the human defaults.
inline OrcaParams robot_orca_defaults() {
  OrcaParams p;
  p.time_horizon = 15.0;
  p.responsibility = 1.0;
  p.safety_margin = 0.7;
  return p;
}

inline SfmParams robot_sfm_defaults() {
  SfmParams p;
  p.relaxation_time = 0.3;
  p.A = 25.0;
  p.B = 0.55;
  p.neighbor_dist = 5.0;
  return p;
}

struct PolicySpec {
  PolicyKind kind{PolicyKind::OrcaRobot};
  std::string command;  // External only
  OrcaParams orca{robot_orca_defaults()};
  SfmParams sfm{robot_sfm_defaults()};
  std::chrono::milliseconds timeout{1000};
};

/// Parses "orca", "sfm", "greedy" or "external:<command>".
PolicySpec parse_policy_spec(const std::string &text);
std::string policy_spec_string(const PolicySpec &spec);

class Policy {
 public:
  virtual ~Policy() = default;
  /// Returned actions always satisfy |a| <= obs.robot.v_max.
  virtual Vec2 decide(const Observation &obs) = 0;
};

class GoalGreedyPolicy final : public Policy {
 public:
  Vec2 decide(const Observation &obs) override;
};

/// Keeps the last observed position of every human id, so neighbour
/// velocities can be estimated by one-step differencing.
class HumanVelocityEstimator {
 public:
  explicit HumanVelocityEstimator(double dt) : dt_(dt) {}
  std::vector<AgentKinematics> update(const Observation &obs);

 private:
  double dt_;
  std::map<std::size_t, Vec2> last_seen_;
};

class OrcaRobotPolicy final : public Policy {
 public:
  OrcaRobotPolicy(OrcaParams params, double dt) : params_(params), dt_(dt), estimator_(dt) {}
  Vec2 decide(const Observation &obs) override;

 private:
  OrcaParams params_;
  double dt_;
  HumanVelocityEstimator estimator_;
};

class SfmRobotPolicy final : public Policy {
 public:
  SfmRobotPolicy(SfmParams params, double dt) : params_(params), dt_(dt), estimator_(dt) {}
  Vec2 decide(const Observation &obs) override;

 private:
  SfmParams params_;
  double dt_;
  HumanVelocityEstimator estimator_;
};

// Wire format helpers.
std::string handshake_message(double dt, double time_limit);
std::string observation_message(const Observation &obs);
/// Throws Error{ExternalPolicyFailure} on anything but {"vx": n, "vy": n}.
Vec2 parse_action_reply(const std::string &line);

class ExternalPolicy final : public Policy {
 public:
  /// Starts the child and completes the handshake.
  ExternalPolicy(const std::string &command, double dt, double time_limit,
                 std::chrono::milliseconds timeout = std::chrono::milliseconds(1000));
  Vec2 decide(const Observation &obs) override;

 private:
  std::string read_reply(const char *what);

  std::string command_;
  std::chrono::milliseconds timeout_;
  LineProcess process_;
};

Vec2 clamp_action(const Vec2 &action, double v_max);

/// Handshake and three synthetic observations against `command`. Returns a
/// transcript of the clamped replies; throws Error{ExternalPolicyFailure}.
std::string protocol_check(const std::string &command,
                           std::chrono::milliseconds timeout = std::chrono::milliseconds(1000));

std::unique_ptr<Policy> make_policy(const PolicySpec &spec, const ScenarioConfig &scenario);

}  // namespace crowdbench
