// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#include "crowdbench/crowdbench.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <string>

#include "bench.hpp"
#include "config_io.hpp"
#include "errors.hpp"
#include "policies.hpp"
#include "report.hpp"
#include "trajmetric.hpp"

struct cb_trajectory {
  crowdbench::Trajectory traj;
};

struct cb_run {
  crowdbench::RunSpec spec;
  std::optional<crowdbench::BatchResult> result;
};

namespace {

using namespace crowdbench;

thread_local std::string g_last_error;

cb_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return CB_ERR_INVALID_ARGUMENT;
    case ErrorCode::Config: return CB_ERR_CONFIG;
    case ErrorCode::InsufficientPoints: return CB_ERR_INSUFFICIENT_POINTS;
    case ErrorCode::InvalidWeights: return CB_ERR_INVALID_WEIGHTS;
    case ErrorCode::PlacementFailure: return CB_ERR_PLACEMENT_FAILURE;
    case ErrorCode::SteppedTerminalEpisode: return CB_ERR_STEPPED_TERMINAL;
    case ErrorCode::ExternalPolicyFailure: return CB_ERR_POLICY_FAILURE;
    case ErrorCode::EmptyBatch: return CB_ERR_EMPTY_BATCH;
    case ErrorCode::Io: return CB_ERR_IO;
  }
  return CB_ERR_INTERNAL;
}

cb_status fail(cb_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body and turns any exception into a status plus last-error message.
template <typename F>
cb_status guarded(F &&body) {
  try {
    g_last_error.clear();
    body();
    return CB_OK;
  } catch (const Error &e) {
    return fail(status_of(e.code()), e.what());
  } catch (const nlohmann::json::exception &e) {
    return fail(CB_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc &) {
    return fail(CB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(CB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CB_ERR_INTERNAL, "unknown error");
  }
}

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char *what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

SmoothnessConfig smoothness(double tau) {
  SmoothnessConfig cfg;
  cfg.tau = tau;
  require(tau > 0.0, "tau must be > 0");
  return cfg;
}

ScoringConfig from_c(const cb_scoring_config &c) {
  ScoringConfig s;
  s.tau_S = c.tau_S;
  s.beta = c.beta;
  s.gamma = c.gamma;
  s.lambda_comf = c.lambda_comf;
  s.tau_md_min = c.tau_md_min;
  s.t_star = c.t_star;
  s.weights = {c.weights.saf, c.weights.suc, c.weights.comf, c.weights.traj, c.weights.effic};
  return s;
}

void to_c(const ScoreBreakdown &s, cb_scores *out) {
  *out = {s.f_saf, s.f_suc,     s.f_comf,        s.f_traj, s.f_effic,
          s.f_comf_dn, s.f_comf_md, s.comprehensive, s.efficiency_undefined ? 1 : 0};
}

const BatchResult &finished(const cb_run *run) {
  require(run != nullptr, "run is null");
  if (!run->result) throw Error(ErrorCode::InvalidArgument, "run has not been executed");
  return *run->result;
}

}  // namespace

extern "C" {

const char *cb_version(void) { return "0.1.0"; }

const char *cb_status_name(cb_status status) {
  switch (status) {
    case CB_OK: return "ok";
    case CB_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CB_ERR_CONFIG: return "config";
    case CB_ERR_INSUFFICIENT_POINTS: return "insufficient_points";
    case CB_ERR_INVALID_WEIGHTS: return "invalid_weights";
    case CB_ERR_PLACEMENT_FAILURE: return "placement_failure";
    case CB_ERR_STEPPED_TERMINAL: return "stepped_terminal_episode";
    case CB_ERR_POLICY_FAILURE: return "external_policy_failure";
    case CB_ERR_EMPTY_BATCH: return "empty_batch";
    case CB_ERR_IO: return "io";
    case CB_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char *cb_last_error(void) { return g_last_error.c_str(); }

void cb_string_free(char *s) { std::free(s); }

cb_status cb_trajectory_create(const double *xy, size_t n_points, double dt, cb_trajectory **out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(xy != nullptr || n_points == 0, "xy is null");
    require(dt > 0.0, "dt must be > 0");
    auto t = std::make_unique<cb_trajectory>();
    t->traj.dt = dt;
    for (size_t i = 0; i < n_points; ++i) t->traj.points.push_back({xy[2 * i], xy[2 * i + 1]});
    *out = t.release();
  });
}

cb_status cb_trajectory_load_csv(const char *path, cb_trajectory **out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and out must be non-null");
    auto t = std::make_unique<cb_trajectory>();
    t->traj = load_trajectory_csv(path);
    *out = t.release();
  });
}

cb_status cb_trajectory_load_log(const char *path, size_t ep, double dt, cb_trajectory **out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and out must be non-null");
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, std::string("cannot open '") + path + "'");
    for (const auto &e : parse_trajectory_log(in)) {
      if (e.ep == ep) {
        auto t = std::make_unique<cb_trajectory>();
        t->traj = trajectory_from_log(e, dt);
        *out = t.release();
        return;
      }
    }
    throw Error(ErrorCode::InvalidArgument, "episode " + std::to_string(ep) + " not found in '" + path + "'");
  });
}

void cb_trajectory_free(cb_trajectory *traj) { delete traj; }

size_t cb_trajectory_size(const cb_trajectory *traj) { return traj == nullptr ? 0 : traj->traj.points.size(); }

cb_status cb_curvature(const double p1[2], const double p2[2], const double p3[2], double *kappa) {
  return guarded([&] {
    require(p1 && p2 && p3 && kappa, "arguments must be non-null");
    *kappa = circumcircle_curvature({p1[0], p1[1]}, {p2[0], p2[1]}, {p3[0], p3[1]});
  });
}

cb_status cb_discontinuity_ratio(const cb_trajectory *traj, double tau, double *ratio) {
  return guarded([&] {
    require(traj != nullptr && ratio != nullptr, "arguments must be non-null");
    *ratio = discontinuity_ratio(traj->traj, smoothness(tau));
  });
}

cb_status cb_curvature_windows_json(const cb_trajectory *traj, double tau, char **json) {
  return guarded([&] {
    require(traj != nullptr && json != nullptr, "arguments must be non-null");
    const SmoothnessConfig cfg = smoothness(tau);
    const auto windows = curvature_windows(traj->traj, cfg);
    nlohmann::ordered_json j;
    j["tau"] = tau;
    j["windows"] = nlohmann::ordered_json::array();
    for (const auto &w : windows) {
      j["windows"].push_back(
          {{"kappa1", w.kappa1}, {"kappa2", w.kappa2}, {"delta", w.delta}, {"degenerate", w.degenerate}});
    }
    j["cdr"] = discontinuity_ratio_from_windows(windows, tau);
    *json = dup_string(j.dump());
  });
}

cb_status cb_smoothness_penalty(double delta_kappa, double lambda, double tau_c, double *penalty) {
  return guarded([&] {
    require(penalty != nullptr, "penalty is null");
    *penalty = smoothness_penalty(delta_kappa, lambda, tau_c);
  });
}

void cb_scoring_defaults(int high_density, cb_scoring_config *out) {
  if (out == nullptr) return;
  const ScoringConfig s = ScoringConfig::for_preset(high_density ? DensityPreset::High : DensityPreset::Low);
  *out = {s.tau_S, s.beta, s.gamma, s.lambda_comf, s.tau_md_min, s.t_star,
          {s.weights.saf, s.weights.suc, s.weights.comf, s.weights.traj, s.weights.effic}};
}

cb_status cb_score(const cb_metrics *metrics, const cb_scoring_config *cfg, cb_scores *out) {
  return guarded([&] {
    require(metrics && cfg && out, "arguments must be non-null");
    const BatchMetrics m{metrics->sr, metrics->cr, metrics->tr, metrics->at, metrics->dr, metrics->md, metrics->cdr};
    to_c(comprehensive_score(m, from_c(*cfg)), out);
  });
}

cb_status cb_score_text(const char *input, const char *scoring_json, const char *preset, char **json,
                        char **table) {
  return guarded([&] {
    require(input != nullptr, "input is null");
    ScoringConfig cfg = ScoringConfig::for_preset(preset ? parse_preset(preset) : DensityPreset::Low);
    if (scoring_json != nullptr && *scoring_json != '\0') {
      const Json j = Json::parse(scoring_json, nullptr, false);
      if (j.is_discarded()) throw Error(ErrorCode::Config, "scoring config is not valid JSON");
      cfg = scoring_from_json(j.contains("scoring") ? j["scoring"] : j, cfg);
    }
    const ScoreBreakdown s = score_input(parse_score_input(input), cfg);
    if (json != nullptr) *json = dup_string(scores_json(s).dump(2) + "\n");
    if (table != nullptr) *table = dup_string(score_table(s));
  });
}

cb_status cb_run_create(const char *config_json, cb_run **out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    auto run = std::make_unique<cb_run>();
    run->spec = preset_run_spec(DensityPreset::Low);
    if (config_json != nullptr && *config_json != '\0') {
      const Json j = Json::parse(config_json, nullptr, false);
      if (j.is_discarded()) throw Error(ErrorCode::Config, "run config is not valid JSON");
      run->spec = run_spec_from_json(j, run->spec);
    } else {
      run->spec.validate();
    }
    *out = run.release();
  });
}

void cb_run_free(cb_run *run) { delete run; }

cb_status cb_run_config_json(const cb_run *run, char **json) {
  return guarded([&] {
    require(run != nullptr && json != nullptr, "arguments must be non-null");
    *json = dup_string(to_json(run->spec).dump(2) + "\n");
  });
}

cb_status cb_run_execute(cb_run *run, unsigned workers) {
  return guarded([&] {
    require(run != nullptr, "run is null");
    run->result.reset();
    run->result = run_batch(run->spec, workers);
  });
}

cb_status cb_run_excluded(const cb_run *run, size_t *excluded) {
  return guarded([&] {
    require(excluded != nullptr, "excluded is null");
    *excluded = finished(run).report.excluded_episodes;
  });
}

cb_status cb_run_summary(const cb_run *run, cb_metrics *seed_mean, cb_scores *scores) {
  return guarded([&] {
    const AggregateReport &r = finished(run).report;
    if (seed_mean != nullptr) {
      const BatchMetrics &m = r.seed_mean;
      *seed_mean = {m.sr, m.cr, m.tr, m.at, m.dr, m.md, m.cdr};
    }
    if (scores != nullptr) to_c(r.scores, scores);
  });
}

cb_status cb_run_emit_report(const cb_run *run, const char *format, char **text) {
  return guarded([&] {
    require(format != nullptr && text != nullptr, "arguments must be non-null");
    const BatchResult &res = finished(run);
    const std::string f = format;
    if (f == "json") {
      *text = dup_string(report_json(res, run->spec).dump(2) + "\n");
    } else if (f == "csv") {
      *text = dup_string(report_csv(res.report));
    } else if (f == "markdown") {
      *text = dup_string(report_markdown(res.report));
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown report format '" + f + "'");
    }
  });
}

cb_status cb_run_write_log(const cb_run *run, const char *path) {
  return guarded([&] {
    require(path != nullptr, "path is null");
    const BatchResult &res = finished(run);
    if (!run->spec.record_steps) {
      throw Error(ErrorCode::InvalidArgument, "run was not configured with record_steps");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, std::string("cannot write '") + path + "'");
    write_trajectory_log(out, res.records);
    if (!out) throw Error(ErrorCode::Io, std::string("error writing '") + path + "'");
  });
}

cb_status cb_protocol_check(const char *command, unsigned timeout_ms, char **transcript) {
  return guarded([&] {
    require(command != nullptr && *command != '\0', "command is empty");
    const std::string t = protocol_check(command, std::chrono::milliseconds(timeout_ms == 0 ? 1000 : timeout_ms));
    if (transcript != nullptr) *transcript = dup_string(t);
  });
}

cb_status cb_plot_from_log(const char *log_path, size_t ep, const char *scenario_json, char **svg) {
  return guarded([&] {
    require(log_path != nullptr && svg != nullptr, "arguments must be non-null");
    ScenarioConfig scenario;
    if (scenario_json != nullptr && *scenario_json != '\0') {
      const Json j = Json::parse(scenario_json, nullptr, false);
      if (j.is_discarded()) throw Error(ErrorCode::Config, "scenario config is not valid JSON");
      scenario = scenario_from_json(j, scenario);
    }
    std::ifstream in(log_path);
    if (!in) throw Error(ErrorCode::Io, std::string("cannot open '") + log_path + "'");
    for (const auto &e : parse_trajectory_log(in)) {
      if (e.ep == ep) {
        const PlotStyle style{scenario.robot_goal, scenario.robot_radius, scenario.human_radius,
                              scenario.discomfort_dist};
        *svg = dup_string(plot_svg(e, style));
        return;
      }
    }
    throw Error(ErrorCode::InvalidArgument,
                "episode " + std::to_string(ep) + " not found in '" + log_path + "'");
  });
}

}  // extern "C"
