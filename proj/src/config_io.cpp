// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#include "config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace crowdbench {

namespace {

// Reads named fields out of one JSON object and complains about the rest.
class ObjectReader {
 public:
  ObjectReader(const Json &j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) {
      throw Error(ErrorCode::Config, where_ + " must be a JSON object");
    }
  }

  bool has(const char *key) const { return j_.contains(key); }

  const Json *raw(const char *key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  template <typename T>
  void get(const char *key, T &out) {
    const Json *v = raw(key);
    if (v == nullptr) return;
    try {
      out = v->get<T>();
    } catch (const nlohmann::json::exception &) {
      throw Error(ErrorCode::Config, where_ + "." + key + " has the wrong type");
    }
  }

  void get_number(const char *key, double &out) {
    const Json *v = raw(key);
    if (v == nullptr) return;
    if (!v->is_number()) {
      throw Error(ErrorCode::Config, where_ + "." + key + " must be a number");
    }
    out = v->get<double>();
  }

  void get_point(const char *key, Vec2 &out) {
    const Json *v = raw(key);
    if (v == nullptr) return;
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
      throw Error(ErrorCode::Config, where_ + "." + key + " must be [x, y]");
    }
    out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
  }

  void finish() const {
    for (const auto &[key, value] : j_.items()) {
      if (!seen_.contains(key)) {
        throw Error(ErrorCode::Config, "unknown key '" + key + "' in " + where_);
      }
    }
  }

  const std::string &where() const { return where_; }

 private:
  const Json &j_;
  std::string where_;
  std::set<std::string> seen_;
};

Json point_json(const Vec2 &p) { return Json::array({p.x, p.y}); }

const char *human_policy_name(HumanPolicy p) { return p == HumanPolicy::Orca ? "orca" : "sfm"; }

HumanPolicy parse_human_policy(const std::string &s) {
  if (s == "orca") return HumanPolicy::Orca;
  if (s == "sfm") return HumanPolicy::Sfm;
  throw Error(ErrorCode::Config, "human_policy must be 'orca' or 'sfm', got '" + s + "'");
}

Json orca_json(const OrcaParams &p) {
  return {{"time_horizon", p.time_horizon},
          {"neighbor_dist", p.neighbor_dist},
          {"max_speed", p.max_speed},
          {"responsibility", p.responsibility},
          {"safety_margin", p.safety_margin}};
}

OrcaParams orca_from(const Json &j, OrcaParams p, const std::string &where) {
  ObjectReader r(j, where);
  r.get_number("time_horizon", p.time_horizon);
  r.get_number("neighbor_dist", p.neighbor_dist);
  r.get_number("max_speed", p.max_speed);
  r.get_number("responsibility", p.responsibility);
  r.get_number("safety_margin", p.safety_margin);
  r.finish();
  if (!(p.time_horizon > 0.0) || !(p.neighbor_dist >= 0.0) || !(p.max_speed > 0.0) ||
      !(p.responsibility > 0.0 && p.responsibility <= 1.0) || !(p.safety_margin >= 0.0)) {
    throw Error(ErrorCode::Config, where + " has an out-of-range value");
  }
  return p;
}

Json sfm_json(const SfmParams &p) {
  return {{"relaxation_time", p.relaxation_time},
          {"A", p.A},
          {"B", p.B},
          {"neighbor_dist", p.neighbor_dist},
          {"max_speed", p.max_speed}};
}

SfmParams sfm_from(const Json &j, SfmParams p, const std::string &where) {
  ObjectReader r(j, where);
  r.get_number("relaxation_time", p.relaxation_time);
  r.get_number("A", p.A);
  r.get_number("B", p.B);
  r.get_number("neighbor_dist", p.neighbor_dist);
  r.get_number("max_speed", p.max_speed);
  r.finish();
  if (!(p.relaxation_time > 0.0) || !(p.A >= 0.0) || !(p.B > 0.0) || !(p.neighbor_dist >= 0.0) ||
      !(p.max_speed > 0.0)) {
    throw Error(ErrorCode::Config, where + " has an out-of-range value");
  }
  return p;
}

}  // namespace

DensityPreset parse_preset(const std::string &name) {
  if (name == "low") return DensityPreset::Low;
  if (name == "high") return DensityPreset::High;
  throw Error(ErrorCode::Config, "preset must be 'low' or 'high', got '" + name + "'");
}

const char *preset_name(DensityPreset preset) { return preset == DensityPreset::Low ? "low" : "high"; }

Json to_json(const ScenarioConfig &c) {
  return {{"density_preset", preset_name(c.density_preset)},
          {"n_humans", c.n_humans},
          {"circle_radius", c.circle_radius},
          {"dt", c.dt},
          {"time_limit", c.time_limit},
          {"sensing_range", c.sensing_range},
          {"robot_start", point_json(c.robot_start)},
          {"robot_goal", point_json(c.robot_goal)},
          {"v_max", c.v_max},
          {"robot_radius", c.robot_radius},
          {"human_radius", c.human_radius},
          {"human_pref_speed", c.human_pref_speed},
          {"goal_switch_prob", c.goal_switch_prob},
          {"invisible_robot", c.invisible_robot},
          {"shaping",
           {{"enabled", c.shaping.enabled},
            {"lambda", c.shaping.lambda},
            {"tau_c", c.shaping.tau_c},
            {"w_smooth", c.shaping.w_smooth}}},
          {"human_policy", human_policy_name(c.human_policy)},
          {"human_orca", orca_json(c.human_orca)},
          {"human_sfm", sfm_json(c.human_sfm)},
          {"spawn_perturbation", c.spawn_perturbation},
          {"spawn_margin", c.spawn_margin},
          {"discomfort_dist", c.discomfort_dist},
          {"continuous_separation", c.continuous_separation},
          {"eps_len", c.eps_len}};
}

ScenarioConfig scenario_from_json(const Json &j, ScenarioConfig c) {
  ObjectReader r(j, "scenario");
  if (const Json *p = r.raw("density_preset")) {
    if (!p->is_string()) throw Error(ErrorCode::Config, "scenario.density_preset must be a string");
    c.density_preset = parse_preset(p->get<std::string>());
  }
  if (const Json *n = r.raw("n_humans")) {
    if (!n->is_number_unsigned()) {
      throw Error(ErrorCode::Config, "scenario.n_humans must be a non-negative integer");
    }
    c.n_humans = n->get<std::size_t>();
  }
  r.get_number("circle_radius", c.circle_radius);
  r.get_number("dt", c.dt);
  r.get_number("time_limit", c.time_limit);
  r.get_number("sensing_range", c.sensing_range);
  r.get_point("robot_start", c.robot_start);
  r.get_point("robot_goal", c.robot_goal);
  r.get_number("v_max", c.v_max);
  r.get_number("robot_radius", c.robot_radius);
  r.get_number("human_radius", c.human_radius);
  r.get_number("human_pref_speed", c.human_pref_speed);
  r.get_number("goal_switch_prob", c.goal_switch_prob);
  r.get("invisible_robot", c.invisible_robot);
  if (const Json *s = r.raw("shaping")) {
    ObjectReader sr(*s, "scenario.shaping");
    sr.get("enabled", c.shaping.enabled);
    sr.get_number("lambda", c.shaping.lambda);
    sr.get_number("tau_c", c.shaping.tau_c);
    sr.get_number("w_smooth", c.shaping.w_smooth);
    sr.finish();
  }
  if (const Json *p = r.raw("human_policy")) {
    if (!p->is_string()) throw Error(ErrorCode::Config, "scenario.human_policy must be a string");
    c.human_policy = parse_human_policy(p->get<std::string>());
  }
  if (const Json *o = r.raw("human_orca")) c.human_orca = orca_from(*o, c.human_orca, "scenario.human_orca");
  if (const Json *s = r.raw("human_sfm")) c.human_sfm = sfm_from(*s, c.human_sfm, "scenario.human_sfm");
  r.get_number("spawn_perturbation", c.spawn_perturbation);
  r.get_number("spawn_margin", c.spawn_margin);
  r.get_number("discomfort_dist", c.discomfort_dist);
  r.get("continuous_separation", c.continuous_separation);
  r.get_number("eps_len", c.eps_len);
  r.finish();
  c.validate();
  return c;
}

Json to_json(const ScoringConfig &c) {
  return {{"tau_S", c.tau_S},
          {"beta", c.beta},
          {"gamma", c.gamma},
          {"lambda_comf", c.lambda_comf},
          {"tau_md_min", c.tau_md_min},
          {"t_star", c.t_star},
          {"weights",
           {{"saf", c.weights.saf},
            {"suc", c.weights.suc},
            {"comf", c.weights.comf},
            {"traj", c.weights.traj},
            {"effic", c.weights.effic}}}};
}

ScoringConfig scoring_from_json(const Json &j, ScoringConfig c) {
  ObjectReader r(j, "scoring");
  r.get_number("tau_S", c.tau_S);
  r.get_number("beta", c.beta);
  r.get_number("gamma", c.gamma);
  r.get_number("lambda_comf", c.lambda_comf);
  r.get_number("tau_md_min", c.tau_md_min);
  r.get_number("t_star", c.t_star);
  if (const Json *w = r.raw("weights")) {
    ObjectReader wr(*w, "scoring.weights");
    wr.get_number("saf", c.weights.saf);
    wr.get_number("suc", c.weights.suc);
    wr.get_number("comf", c.weights.comf);
    wr.get_number("traj", c.weights.traj);
    wr.get_number("effic", c.weights.effic);
    wr.finish();
  }
  r.finish();
  return c;
}

Json to_json(const SmoothnessConfig &c) { return {{"tau", c.tau}, {"eps_len", c.eps_len}}; }

SmoothnessConfig smoothness_from_json(const Json &j, SmoothnessConfig c) {
  ObjectReader r(j, "smoothness");
  r.get_number("tau", c.tau);
  r.get_number("eps_len", c.eps_len);
  r.finish();
  return c;
}

Json to_json(const PolicySpec &s) {
  Json j{{"kind", policy_kind_name(s.kind)}};
  switch (s.kind) {
    case PolicyKind::OrcaRobot: j["orca"] = orca_json(s.orca); break;
    case PolicyKind::SfmRobot: j["sfm"] = sfm_json(s.sfm); break;
    case PolicyKind::External:
      j["command"] = s.command;
      j["timeout_ms"] = s.timeout.count();
      break;
    case PolicyKind::GoalGreedy: break;
  }
  return j;
}

PolicySpec policy_from_json(const Json &j, PolicySpec base) {
  if (j.is_string()) {
    PolicySpec parsed = parse_policy_spec(j.get<std::string>());
    base.kind = parsed.kind;
    base.command = parsed.command;
    return base;
  }
  ObjectReader r(j, "policy");
  if (const Json *k = r.raw("kind")) {
    if (!k->is_string()) throw Error(ErrorCode::Config, "policy.kind must be a string");
    const std::string kind = k->get<std::string>();
    if (kind == "external") {
      base.kind = PolicyKind::External;
    } else {
      base.kind = parse_policy_spec(kind).kind;
    }
  }
  r.get("command", base.command);
  if (const Json *t = r.raw("timeout_ms")) {
    if (!t->is_number_unsigned() || t->get<std::uint64_t>() == 0) {
      throw Error(ErrorCode::Config, "policy.timeout_ms must be a positive integer");
    }
    base.timeout = std::chrono::milliseconds(t->get<std::int64_t>());
  }
  if (const Json *o = r.raw("orca")) base.orca = orca_from(*o, base.orca, "policy.orca");
  if (const Json *s = r.raw("sfm")) base.sfm = sfm_from(*s, base.sfm, "policy.sfm");
  r.finish();
  if (base.kind == PolicyKind::External && base.command.empty()) {
    throw Error(ErrorCode::Config, "external policy needs policy.command");
  }
  return base;
}

Json to_json(const RunSpec &s) {
  return {{"scenario", to_json(s.scenario)},
          {"policy", to_json(s.policy)},
          {"episodes_per_seed", s.episodes_per_seed},
          {"seeds", s.seeds},
          {"scoring", to_json(s.scoring)},
          {"smoothness", to_json(s.smoothness)},
          {"record_steps", s.record_steps}};
}

RunSpec preset_run_spec(DensityPreset preset) {
  RunSpec spec;
  spec.scenario = ScenarioConfig::preset(preset);
  spec.scoring = ScoringConfig::for_preset(preset);
  spec.scoring.t_star = spec.scenario.optimal_time();
  return spec;
}

RunSpec run_spec_from_json(const Json &j, RunSpec spec) {
  ObjectReader r(j, "run config");
  if (const Json *p = r.raw("preset")) {
    if (!p->is_string()) throw Error(ErrorCode::Config, "preset must be a string");
    const RunSpec fresh = preset_run_spec(parse_preset(p->get<std::string>()));
    spec.scenario = fresh.scenario;
    spec.scoring = fresh.scoring;
  }
  bool explicit_t_star = false;
  if (const Json *s = r.raw("scenario")) spec.scenario = scenario_from_json(*s, spec.scenario);
  if (const Json *p = r.raw("policy")) spec.policy = policy_from_json(*p, spec.policy);
  if (const Json *e = r.raw("episodes_per_seed")) {
    if (!e->is_number_unsigned() || e->get<std::size_t>() == 0) {
      throw Error(ErrorCode::Config, "episodes_per_seed must be a positive integer");
    }
    spec.episodes_per_seed = e->get<std::size_t>();
  }
  if (const Json *s = r.raw("seeds")) {
    if (!s->is_array()) throw Error(ErrorCode::Config, "seeds must be an array of integers");
    spec.seeds.clear();
    for (const auto &v : *s) {
      if (!v.is_number_unsigned()) throw Error(ErrorCode::Config, "seeds must be non-negative integers");
      spec.seeds.push_back(v.get<std::uint64_t>());
    }
  }
  if (const Json *s = r.raw("scoring")) {
    explicit_t_star = s->is_object() && s->contains("t_star");
    spec.scoring = scoring_from_json(*s, spec.scoring);
  }
  if (!explicit_t_star) {
    spec.scoring.t_star = spec.scenario.optimal_time();
  }
  if (const Json *s = r.raw("smoothness")) spec.smoothness = smoothness_from_json(*s, spec.smoothness);
  r.get("record_steps", spec.record_steps);
  r.finish();
  spec.validate();
  return spec;
}

Json load_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  Json j = Json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorCode::Config, "'" + path + "' is not valid JSON");
  }
  return j;
}

}  // namespace crowdbench
