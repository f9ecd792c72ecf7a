// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#include "policies.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "errors.hpp"

namespace crowdbench {

const char *policy_kind_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::OrcaRobot: return "orca";
    case PolicyKind::SfmRobot: return "sfm";
    case PolicyKind::GoalGreedy: return "greedy";
    case PolicyKind::External: return "external";
  }
  return "unknown";
}

PolicySpec parse_policy_spec(const std::string &text) {
  PolicySpec spec;
  if (text == "orca") {
    spec.kind = PolicyKind::OrcaRobot;
  } else if (text == "sfm") {
    spec.kind = PolicyKind::SfmRobot;
  } else if (text == "greedy") {
    spec.kind = PolicyKind::GoalGreedy;
  } else if (text.rfind("external:", 0) == 0 && text.size() > 9) {
    spec.kind = PolicyKind::External;
    spec.command = text.substr(9);
  } else {
    throw Error(ErrorCode::Config,
                "unknown policy '" + text + "' (expected orca, sfm, greedy or external:<cmd>)");
  }
  return spec;
}

std::string policy_spec_string(const PolicySpec &spec) {
  if (spec.kind == PolicyKind::External) {
    return "external:" + spec.command;
  }
  return policy_kind_name(spec.kind);
}

Vec2 clamp_action(const Vec2 &action, double v_max) {
  if (!is_finite(action)) {
    return {};
  }
  return clamp_length(action, v_max);
}

Vec2 GoalGreedyPolicy::decide(const Observation &obs) {
  const Vec2 dir = normalized(obs.robot.goal - obs.robot.position);
  return clamp_action(dir * obs.robot.v_max, obs.robot.v_max);
}

std::vector<AgentKinematics> HumanVelocityEstimator::update(const Observation &obs) {
  std::vector<AgentKinematics> out;
  out.reserve(obs.humans.size());
  std::map<std::size_t, Vec2> seen;
  for (const auto &h : obs.humans) {
    Vec2 velocity;
    if (auto it = last_seen_.find(h.id); it != last_seen_.end()) {
      velocity = (h.position - it->second) / dt_;
    }
    out.push_back({h.position, velocity, h.radius});
    seen.emplace(h.id, h.position);
  }
  last_seen_ = std::move(seen);
  return out;
}

Vec2 OrcaRobotPolicy::decide(const Observation &obs) {
  const auto neighbors = estimator_.update(obs);
  OrcaParams params = params_;
  params.max_speed = obs.robot.v_max;
  const AgentKinematics self{obs.robot.position, obs.robot.velocity, obs.robot.radius};
  const Vec2 pref = desired_velocity(obs.robot.position, obs.robot.goal, obs.robot.v_max, dt_);
  return clamp_action(orca_velocity(self, neighbors, params, pref, dt_), obs.robot.v_max);
}

Vec2 SfmRobotPolicy::decide(const Observation &obs) {
  const auto neighbors = estimator_.update(obs);
  SfmParams params = params_;
  params.max_speed = obs.robot.v_max;
  const AgentKinematics self{obs.robot.position, obs.robot.velocity, obs.robot.radius};
  const Vec2 desired = desired_velocity(obs.robot.position, obs.robot.goal, obs.robot.v_max, dt_);
  return clamp_action(sfm_velocity(self, neighbors, params, desired, dt_), obs.robot.v_max);
}

std::string handshake_message(double dt, double time_limit) {
  nlohmann::json j;
  j["proto"] = 1;
  j["dt"] = dt;
  j["time_limit"] = time_limit;
  return j.dump();
}

std::string observation_message(const Observation &obs) {
  nlohmann::json robot{{"px", obs.robot.position.x}, {"py", obs.robot.position.y},
                       {"vx", obs.robot.velocity.x}, {"vy", obs.robot.velocity.y},
                       {"gx", obs.robot.goal.x},     {"gy", obs.robot.goal.y},
                       {"vmax", obs.robot.v_max},    {"theta", obs.robot.theta},
                       {"rho", obs.robot.radius}};
  nlohmann::json humans = nlohmann::json::array();
  for (const auto &h : obs.humans) {
    humans.push_back({{"px", h.position.x}, {"py", h.position.y}, {"rho", h.radius}});
  }
  nlohmann::json j;
  j["t"] = obs.time;
  j["robot"] = std::move(robot);
  j["humans"] = std::move(humans);
  return j.dump();
}

Vec2 parse_action_reply(const std::string &line) {
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::ExternalPolicyFailure, "malformed policy reply: " + line.substr(0, 200));
  }
  const auto vx = j.find("vx");
  const auto vy = j.find("vy");
  if (vx == j.end() || vy == j.end() || !vx->is_number() || !vy->is_number()) {
    throw Error(ErrorCode::ExternalPolicyFailure,
                "policy reply lacks numeric vx/vy: " + line.substr(0, 200));
  }
  const Vec2 a{vx->get<double>(), vy->get<double>()};
  if (!is_finite(a)) {
    throw Error(ErrorCode::ExternalPolicyFailure, "policy reply is not finite: " + line.substr(0, 200));
  }
  return a;
}

ExternalPolicy::ExternalPolicy(const std::string &command, double dt, double time_limit,
                               std::chrono::milliseconds timeout)
    : command_(command), timeout_(timeout), process_(command) {
  if (!process_.write_line(handshake_message(dt, time_limit))) {
    throw Error(ErrorCode::ExternalPolicyFailure, "policy '" + command_ + "' exited before handshake");
  }
  const std::string reply = read_reply("handshake");
  const auto j = nlohmann::json::parse(reply, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("ok") || j["ok"] != true) {
    throw Error(ErrorCode::ExternalPolicyFailure,
                "policy '" + command_ + "' gave a bad handshake reply: " + reply.substr(0, 200));
  }
}

std::string ExternalPolicy::read_reply(const char *what) {
  std::string line;
  switch (process_.read_line(line, timeout_)) {
    case LineProcess::ReadStatus::Ok:
      return line;
    case LineProcess::ReadStatus::Timeout:
      throw Error(ErrorCode::ExternalPolicyFailure,
                  "policy '" + command_ + "' timed out after " + std::to_string(timeout_.count()) +
                      " ms waiting for " + what + " reply");
    case LineProcess::ReadStatus::Closed:
      break;
  }
  throw Error(ErrorCode::ExternalPolicyFailure,
              "policy '" + command_ + "' closed its output before the " + what + " reply");
}

Vec2 ExternalPolicy::decide(const Observation &obs) {
  if (!process_.write_line(observation_message(obs))) {
    throw Error(ErrorCode::ExternalPolicyFailure, "policy '" + command_ + "' is no longer running");
  }
  return clamp_action(parse_action_reply(read_reply("action")), obs.robot.v_max);
}

std::string protocol_check(const std::string &command, std::chrono::milliseconds timeout) {
  const ScenarioConfig cfg;
  ExternalPolicy policy(command, cfg.dt, cfg.time_limit, timeout);
  std::string transcript = "handshake ok\n";
  for (int k = 0; k < 3; ++k) {
    Observation obs;
    obs.time = k * cfg.dt;
    obs.robot.position = cfg.robot_start + Vec2{0.0, 0.2 * k};
    obs.robot.velocity = k == 0 ? Vec2{} : Vec2{0.0, 0.8};
    obs.robot.goal = cfg.robot_goal;
    obs.robot.v_max = cfg.v_max;
    obs.robot.theta = std::atan2(1.0, 0.0);
    obs.robot.radius = cfg.robot_radius;
    for (int h = 0; h <= k; ++h) {
      obs.humans.push_back({static_cast<std::size_t>(h), Vec2{1.5 * h - 1.0, -1.0 + 0.25 * k}, cfg.human_radius});
    }
    const Vec2 a = policy.decide(obs);
    char buf[128];
    std::snprintf(buf, sizeof buf, "observation %d (%zu humans) -> action (%.4f, %.4f)\n", k + 1,
                  obs.humans.size(), a.x, a.y);
    transcript += buf;
  }
  return transcript;
}

std::unique_ptr<Policy> make_policy(const PolicySpec &spec, const ScenarioConfig &scenario) {
  switch (spec.kind) {
    case PolicyKind::GoalGreedy:
      return std::make_unique<GoalGreedyPolicy>();
    case PolicyKind::OrcaRobot:
      return std::make_unique<OrcaRobotPolicy>(spec.orca, scenario.dt);
    case PolicyKind::SfmRobot:
      return std::make_unique<SfmRobotPolicy>(spec.sfm, scenario.dt);
    case PolicyKind::External:
      return std::make_unique<ExternalPolicy>(spec.command, scenario.dt, scenario.time_limit, spec.timeout);
  }
  throw Error(ErrorCode::Config, "unknown policy kind");
}

}  // namespace crowdbench
