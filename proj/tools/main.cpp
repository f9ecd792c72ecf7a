// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors
//
// crowdbench command-line tool. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "crowdbench/crowdbench.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPolicy = 3;

// Error carrying the process exit code.
struct Failure {
  int code;
  std::string message;
};

int exit_code_for(cb_status s) {
  switch (s) {
    case CB_OK: return kExitOk;
    case CB_ERR_POLICY_FAILURE: return kExitPolicy;
    case CB_ERR_INTERNAL:
    case CB_ERR_PLACEMENT_FAILURE:
    case CB_ERR_STEPPED_TERMINAL: return kExitInternal;
    default: return kExitConfig;
  }
}

void check(cb_status s) {
  if (s != CB_OK) {
    throw Failure{exit_code_for(s), std::string(cb_status_name(s)) + ": " + cb_last_error()};
  }
}

// Owns a string handed out by the library.
std::string take(char *s) {
  std::string out = s ? s : "";
  cb_string_free(s);
  return out;
}

std::string read_file(const std::string &path, const char *what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitConfig, std::string("cannot read ") + what + " '" + path + "'"};
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json(const std::string &path, const char *what) {
  json j = json::parse(read_file(path, what), nullptr, false);
  if (j.is_discarded()) throw Failure{kExitConfig, std::string(what) + " '" + path + "' is not valid JSON"};
  return j;
}

void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Failure{kExitConfig, "cannot write '" + path.string() + "'"};
}

struct RunOptions {
  std::string config;
  std::string preset;
  std::string policy;
  std::optional<unsigned> seeds;
  std::optional<unsigned> episodes;
  unsigned workers{0};
  std::optional<double> tau, tau_c, lambda, w_smooth;
  bool no_shaping{false};
  bool no_log{false};
  std::string out{"results"};
};

// Config file first, then flags on top.
json compose_run_config(const RunOptions &o) {
  json doc = o.config.empty() ? json::object() : read_json(o.config, "config file");
  if (!doc.is_object()) throw Failure{kExitConfig, "config file '" + o.config + "' must hold a JSON object"};
  if (!o.preset.empty()) doc["preset"] = o.preset;
  if (!o.policy.empty()) {
    if (doc.contains("policy") && doc["policy"].is_object()) {
      const bool external = o.policy.rfind("external:", 0) == 0;
      doc["policy"]["kind"] = external ? "external" : o.policy;
      if (external) {
        doc["policy"]["command"] = o.policy.substr(9);
      } else {
        doc["policy"].erase("command");
      }
    } else {
      doc["policy"] = o.policy;
    }
  }
  if (o.seeds) {
    if (*o.seeds == 0) throw Failure{kExitConfig, "--seeds must be >= 1"};
    json seeds = json::array();
    for (unsigned i = 0; i < *o.seeds; ++i) seeds.push_back(i);
    doc["seeds"] = seeds;
  }
  if (o.episodes) doc["episodes_per_seed"] = *o.episodes;
  if (o.tau) doc["smoothness"]["tau"] = *o.tau;
  if (o.tau_c) doc["scenario"]["shaping"]["tau_c"] = *o.tau_c;
  if (o.lambda) doc["scenario"]["shaping"]["lambda"] = *o.lambda;
  if (o.w_smooth) doc["scenario"]["shaping"]["w_smooth"] = *o.w_smooth;
  if (o.no_shaping) doc["scenario"]["shaping"]["enabled"] = false;
  doc["record_steps"] = !o.no_log;
  return doc;
}

int cmd_run(const RunOptions &o) {
  const json doc = compose_run_config(o);
  cb_run *run = nullptr;
  check(cb_run_create(doc.dump().c_str(), &run));
  std::unique_ptr<cb_run, void (*)(cb_run *)> guard(run, cb_run_free);

  check(cb_run_execute(run, o.workers));

  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) throw Failure{kExitConfig, "cannot create output directory '" + o.out + "': " + ec.message()};
  const std::filesystem::path out(o.out);

  char *text = nullptr;
  check(cb_run_emit_report(run, "json", &text));
  write_file(out / "report.json", take(text));
  check(cb_run_emit_report(run, "csv", &text));
  write_file(out / "report.csv", take(text));
  if (!o.no_log) {
    check(cb_run_write_log(run, (out / "trajectories.jsonl").string().c_str()));
  }
  check(cb_run_emit_report(run, "markdown", &text));
  std::cout << take(text);

  size_t excluded = 0;
  check(cb_run_excluded(run, &excluded));
  if (excluded > 0) {
    std::cerr << "warning: " << excluded
              << " episode(s) failed the policy protocol and were excluded (see report.json)\n";
    return kExitPolicy;
  }
  return kExitOk;
}

int cmd_score(const std::string &input, const std::string &scoring, const std::string &preset) {
  const std::string text = read_file(input, "score input");
  std::string scoring_text;
  if (!scoring.empty()) scoring_text = read_json(scoring, "scoring config").dump();
  char *js = nullptr, *table = nullptr;
  check(cb_score_text(text.c_str(), scoring_text.empty() ? nullptr : scoring_text.c_str(),
                      preset.empty() ? nullptr : preset.c_str(), &js, &table));
  std::cout << take(js) << take(table);
  return kExitOk;
}

int cmd_metric(const std::string &path, double tau, std::optional<std::size_t> ep, double dt) {
  cb_trajectory *traj = nullptr;
  if (ep) {
    check(cb_trajectory_load_log(path.c_str(), *ep, dt, &traj));
  } else {
    check(cb_trajectory_load_csv(path.c_str(), &traj));
  }
  std::unique_ptr<cb_trajectory, void (*)(cb_trajectory *)> guard(traj, cb_trajectory_free);
  char *js = nullptr;
  check(cb_curvature_windows_json(traj, tau, &js));
  const json j = json::parse(take(js));
  std::printf("%-7s %12s %12s %12s %s\n", "window", "kappa1", "kappa2", "delta", "flag");
  std::size_t i = 0;
  for (const auto &w : j["windows"]) {
    const bool degenerate = w["degenerate"].get<bool>();
    const bool jump = !degenerate && w["delta"].get<double>() >= tau;
    std::printf("%-7zu %12.6f %12.6f %12.6f %s\n", i++, w["kappa1"].get<double>(), w["kappa2"].get<double>(),
                w["delta"].get<double>(), degenerate ? "degenerate" : (jump ? "jump" : ""));
  }
  std::printf("M_cdr = %.6f (tau = %.6f, %zu windows)\n", j["cdr"].get<double>(), tau, i);
  return kExitOk;
}

int cmd_plot(const std::string &log, std::size_t ep, const std::string &config, const std::string &out) {
  std::string scenario;
  if (!config.empty()) {
    const json doc = read_json(config, "config file");
    // Accept a report.json, a run config, or a bare scenario block.
    if (doc.contains("config") && doc["config"].contains("scenario")) {
      scenario = doc["config"]["scenario"].dump();
    } else if (doc.contains("scenario")) {
      scenario = doc["scenario"].dump();
    } else {
      scenario = doc.dump();
    }
  }
  char *svg = nullptr;
  check(cb_plot_from_log(log.c_str(), ep, scenario.empty() ? nullptr : scenario.c_str(), &svg));
  const std::string text = take(svg);
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_file(out, text);
  }
  return kExitOk;
}

int cmd_protocol_check(const std::string &command, unsigned timeout_ms) {
  char *transcript = nullptr;
  check(cb_protocol_check(command.c_str(), timeout_ms, &transcript));
  std::cout << take(transcript) << "protocol check passed\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"crowdbench: crowd-navigation simulation and benchmark scoring"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cb_version()));

  RunOptions run;
  auto *run_cmd = app.add_subcommand("run", "Run a seeded evaluation batch");
  run_cmd->add_option("--config", run.config, "Run configuration JSON");
  run_cmd->add_option("--preset", run.preset, "Scenario preset")->check(CLI::IsMember({"low", "high"}));
  run_cmd->add_option("--policy", run.policy, "orca | sfm | greedy | external:<cmd>");
  run_cmd->add_option("--seeds", run.seeds, "Number of seeds (0..N-1)");
  run_cmd->add_option("--episodes", run.episodes, "Episodes per seed");
  run_cmd->add_option("--workers", run.workers, "Worker threads (0 = all cores)");
  run_cmd->add_option("--tau", run.tau, "Curvature-jump threshold for M_cdr");
  run_cmd->add_option("--tau-c", run.tau_c, "Shaping penalty threshold");
  run_cmd->add_option("--lambda", run.lambda, "Shaping penalty scale");
  run_cmd->add_option("--w-smooth", run.w_smooth, "Shaping weight");
  run_cmd->add_flag("--no-shaping", run.no_shaping, "Disable curvature reward shaping");
  run_cmd->add_flag("--no-log", run.no_log, "Skip trajectories.jsonl");
  run_cmd->add_option("--out", run.out, "Output directory");

  std::string score_input, score_cfg, score_preset;
  auto *score_cmd = app.add_subcommand("score", "Score batch metrics or precomputed component scores");
  score_cmd->add_option("input", score_input, "Metrics JSON/CSV or report.json")->required();
  score_cmd->add_option("--scoring", score_cfg, "Scoring configuration JSON");
  score_cmd->add_option("--preset", score_preset, "Default scoring preset")->check(CLI::IsMember({"low", "high"}));

  std::string metric_path;
  double metric_tau = std::log(2.0);
  double metric_dt = 0.25;
  std::optional<std::size_t> metric_ep;
  auto *metric_cmd = app.add_subcommand("metric", "Curvature windows and M_cdr of one trajectory");
  metric_cmd->add_option("trajectory", metric_path, "CSV (t,x,y) or, with --ep, a JSONL log")->required();
  metric_cmd->add_option("--tau", metric_tau, "Curvature-jump threshold");
  metric_cmd->add_option("--ep", metric_ep, "Episode to read from a JSONL log");
  metric_cmd->add_option("--dt", metric_dt, "Time step for JSONL input");

  std::string plot_log, plot_cfg, plot_out;
  std::size_t plot_ep = 0;
  auto *plot_cmd = app.add_subcommand("plot", "SVG of one logged episode");
  plot_cmd->add_option("log", plot_log, "trajectories.jsonl")->required();
  plot_cmd->add_option("--ep", plot_ep, "Episode index");
  plot_cmd->add_option("--config", plot_cfg, "report.json or run config for goal and radii");
  plot_cmd->add_option("--out", plot_out, "Output file (default stdout)");

  std::string check_cmd;
  unsigned check_timeout = 1000;
  auto *check_sub = app.add_subcommand("protocol-check", "Handshake and three observations against a policy");
  check_sub->add_option("command", check_cmd, "Shell command starting the policy")->required();
  check_sub->add_option("--timeout-ms", check_timeout, "Per-reply timeout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*score_cmd) return cmd_score(score_input, score_cfg, score_preset);
    if (*metric_cmd) return cmd_metric(metric_path, metric_tau, metric_ep, metric_dt);
    if (*plot_cmd) return cmd_plot(plot_log, plot_ep, plot_cfg, plot_out);
    if (*check_sub) return cmd_protocol_check(check_cmd, check_timeout);
  } catch (const Failure &f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
