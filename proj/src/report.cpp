// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#include "report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "errors.hpp"

namespace crowdbench {

namespace {

std::string num(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Row {
  std::string scope;
  const ScoreBreakdown *scores;
  const BatchMetrics *metrics;
};

std::vector<Row> table_rows(const AggregateReport &report) {
  std::vector<Row> rows;
  for (const auto &s : report.per_seed) {
    rows.push_back({std::to_string(s.seed), &s.scores, &s.metrics});
  }
  rows.push_back({"all", &report.scores, &report.seed_mean});
  return rows;
}

}  // namespace

Json metrics_json(const BatchMetrics &m) {
  return {{"sr", m.sr}, {"cr", m.cr}, {"tr", m.tr}, {"at", m.at},
          {"dr", m.dr}, {"md", m.md}, {"cdr", m.cdr}};
}

Json scores_json(const ScoreBreakdown &s) {
  return {{"f_saf", s.f_saf},
          {"f_suc", s.f_suc},
          {"f_comf", s.f_comf},
          {"f_comf_dn", s.f_comf_dn},
          {"f_comf_md", s.f_comf_md},
          {"f_traj", s.f_traj},
          {"f_effic", s.f_effic},
          {"comprehensive", s.comprehensive},
          {"efficiency_undefined", s.efficiency_undefined}};
}

Json report_json(const BatchResult &result, const RunSpec &spec) {
  const AggregateReport &r = result.report;
  Json per_seed = Json::array();
  for (const auto &s : r.per_seed) {
    per_seed.push_back({{"seed", s.seed},
                        {"episodes", s.episodes},
                        {"excluded", s.excluded},
                        {"metrics", metrics_json(s.metrics)},
                        {"scores", scores_json(s.scores)}});
  }
  Json failures = Json::array();
  for (const auto &rec : result.records) {
    if (rec.outcome == Outcome::ProtocolFailure) {
      failures.push_back({{"ep", rec.ep}, {"seed", rec.seed}, {"index", rec.index}, {"message", rec.failure}});
    }
  }
  return {{"config", to_json(spec)},
          {"episodes", r.episodes},
          {"excluded_episodes", r.excluded_episodes},
          {"cdr_undefined_episodes", r.cdr_undefined_episodes},
          {"per_seed", per_seed},
          {"pooled", metrics_json(r.pooled)},
          {"seed_mean", metrics_json(r.seed_mean)},
          {"scores", scores_json(r.scores)},
          {"mean_seed_scores", scores_json(r.mean_seed_scores)},
          {"stddev", {{"metrics", metrics_json(r.stddev_metrics)}, {"scores", scores_json(r.stddev_scores)}}},
          {"protocol_failures", failures}};
}

std::string report_csv(const AggregateReport &report) {
  std::ostringstream os;
  os << "scope,comprehensive,F_saf,F_suc,F_comf,F_traj,F_effic,M_sr,M_cr,M_tr,M_dr,M_md,M_cdr,M_at\n";
  for (const auto &row : table_rows(report)) {
    const auto &s = *row.scores;
    const auto &m = *row.metrics;
    os << row.scope;
    for (double v : {s.comprehensive, s.f_saf, s.f_suc, s.f_comf, s.f_traj, s.f_effic, m.sr, m.cr, m.tr, m.dr,
                     m.md, m.cdr, m.at}) {
      os << ',' << num(v, 6);
    }
    os << '\n';
  }
  return os.str();
}

std::string report_markdown(const AggregateReport &report) {
  std::ostringstream os;
  os << "| seed | F | F_saf | F_suc | F_comf | F_traj | F_effic | M_sr (%) | M_cr/M_tr (%) | M_dr (%) | M_md (m) "
        "| M_cdr (%) | M_at (s) |\n";
  os << "|---|---|---|---|---|---|---|---|---|---|---|---|---|\n";
  auto line = [&](const std::string &scope, const ScoreBreakdown &s, const BatchMetrics &m) {
    os << "| " << scope << " | " << num(s.comprehensive, 3) << " | " << num(s.f_saf, 3) << " | "
       << num(s.f_suc, 3) << " | " << num(s.f_comf, 3) << " | " << num(s.f_traj, 3) << " | "
       << num(s.f_effic, 3) << " | " << num(100 * m.sr, 1) << " | " << num(100 * m.cr, 1) << '/'
       << num(100 * m.tr, 1) << " | " << num(100 * m.dr, 3) << " | " << num(m.md, 3) << " | "
       << num(100 * m.cdr, 3) << " | " << num(m.at, 3) << " |\n";
  };
  for (const auto &row : table_rows(report)) {
    line(row.scope == "all" ? "mean" : row.scope, *row.scores, *row.metrics);
  }
  if (report.per_seed.size() > 1) {
    line("std", report.stddev_scores, report.stddev_metrics);
  }
  return os.str();
}

std::string score_table(const ScoreBreakdown &s) {
  std::ostringstream os;
  auto line = [&](const char *name, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-14s %.4f\n", name, v);
    os << buf;
  };
  line("F_saf", s.f_saf);
  line("F_suc", s.f_suc);
  line("F_comf", s.f_comf);
  line("F_traj", s.f_traj);
  line("F_effic", s.f_effic);
  line("comprehensive", s.comprehensive);
  if (s.efficiency_undefined) {
    os << "(no successful episodes: F_effic set to 0)\n";
  }
  return os.str();
}

namespace {

// Maps the accepted spellings onto one canonical key.
std::string canonical_key(const std::string &raw) {
  std::string k = lower(raw);
  if (k.rfind("m_", 0) == 0) k = k.substr(2);
  return k;
}

void assign_field(ScoreInput &in, bool &any_metric, bool &any_score, const std::string &key, double v) {
  static const std::map<std::string, double BatchMetrics::*> metric_fields{
      {"sr", &BatchMetrics::sr}, {"cr", &BatchMetrics::cr}, {"tr", &BatchMetrics::tr},
      {"at", &BatchMetrics::at}, {"dr", &BatchMetrics::dr}, {"md", &BatchMetrics::md},
      {"cdr", &BatchMetrics::cdr}};
  static const std::map<std::string, double ScoreBreakdown::*> score_fields{
      {"f_saf", &ScoreBreakdown::f_saf},   {"f_suc", &ScoreBreakdown::f_suc},
      {"f_comf", &ScoreBreakdown::f_comf}, {"f_traj", &ScoreBreakdown::f_traj},
      {"f_effic", &ScoreBreakdown::f_effic}};
  const std::string k = canonical_key(key);
  if (auto it = metric_fields.find(k); it != metric_fields.end()) {
    in.metrics.*(it->second) = v;
    any_metric = true;
  } else if (auto it2 = score_fields.find(k); it2 != score_fields.end()) {
    in.scores.*(it2->second) = v;
    any_score = true;
  }
}

ScoreInput finish_input(ScoreInput in, bool any_metric, bool any_score) {
  if (!any_metric && !any_score) {
    throw Error(ErrorCode::Config, "score input has no metric or component-score fields");
  }
  // Rows carrying both (our own report.csv) are rescored from the metrics.
  in.precomputed = !any_metric;
  return in;
}

}  // namespace

ScoreInput parse_score_input(const std::string &text) {
  ScoreInput in;
  bool any_metric = false, any_score = false;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorCode::Config, "score input is not a JSON object");
    }
    if (j.contains("seed_mean")) {
      j = j["seed_mean"];
    } else if (j.contains("metrics")) {
      j = j["metrics"];
    }
    for (const auto &[key, value] : j.items()) {
      if (!value.is_number()) continue;
      assign_field(in, any_metric, any_score, key, value.get<double>());
    }
    return finish_input(in, any_metric, any_score);
  }

  auto split = [](const std::string &line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t\r"));
      cell.erase(cell.find_last_not_of(" \t\r") + 1);
      out.push_back(cell);
    }
    return out;
  };
  std::istringstream is(text);
  std::string header, line;
  std::getline(is, header);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) rows.push_back(split(line));
  }
  if (header.empty() || rows.empty()) {
    throw Error(ErrorCode::Config, "score CSV needs a header row and a data row");
  }
  const auto names = split(header);
  // A report CSV carries per-seed rows; its "all" row is the one to score.
  std::vector<std::string> values = rows.front();
  if (!names.empty() && lower(names[0]) == "scope") {
    for (const auto &r : rows) {
      if (!r.empty() && r[0] == "all") values = r;
    }
  }
  if (names.size() != values.size()) {
    throw Error(ErrorCode::Config, "score CSV header and data row differ in length");
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string k = canonical_key(names[i]);
    if (k == "scope" || k == "comprehensive") continue;
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(values[i], &used);
      if (used != values[i].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception &) {
      throw Error(ErrorCode::Config, "score CSV value '" + values[i] + "' for " + names[i] + " is not a number");
    }
    assign_field(in, any_metric, any_score, names[i], v);
  }
  return finish_input(in, any_metric, any_score);
}

ScoreBreakdown score_input(const ScoreInput &input, const ScoringConfig &cfg) {
  if (!input.precomputed) {
    return comprehensive_score(input.metrics, cfg);
  }
  validate_weights(cfg.weights);
  ScoreBreakdown s = input.scores;
  for (double v : {s.f_saf, s.f_suc, s.f_comf, s.f_traj, s.f_effic}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "component scores must lie in [0,1]");
    }
  }
  apply_weights(s, cfg.weights);
  return s;
}

std::string trajectory_log_jsonl(const std::vector<EpisodeRecord> &records) {
  std::ostringstream os;
  write_trajectory_log(os, records);
  return os.str();
}

void write_trajectory_log(std::ostream &out, const std::vector<EpisodeRecord> &records) {
  for (const auto &rec : records) {
    for (const auto &st : rec.steps) {
      nlohmann::ordered_json j;
      j["ep"] = rec.ep;
      j["t"] = st.t;
      j["robot"] = {st.robot.x, st.robot.y};
      nlohmann::ordered_json humans = nlohmann::ordered_json::array();
      for (const auto &h : st.humans) humans.push_back({h.x, h.y});
      j["humans"] = std::move(humans);
      j["r_base"] = st.r_base;
      j["r_shape"] = st.r_shape;
      if (std::isfinite(st.d)) {
        j["d"] = st.d;
      } else {
        j["d"] = nullptr;
      }
      out << j.dump() << '\n';
    }
  }
}

std::vector<LoggedEpisode> parse_trajectory_log(std::istream &in) {
  std::vector<LoggedEpisode> episodes;
  std::map<std::size_t, std::size_t> slot;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto bad = [&](const std::string &why) {
      return Error(ErrorCode::Config, "log line " + std::to_string(line_no) + ": " + why);
    };
    const Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw bad("not a JSON object");
    auto point = [&](const Json &p) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw bad("positions must be [x, y]");
      }
      return Vec2{p[0].get<double>(), p[1].get<double>()};
    };
    for (const char *key : {"ep", "t", "robot", "humans", "r_base", "r_shape", "d"}) {
      if (!j.contains(key)) throw bad(std::string("missing \"") + key + "\"");
    }
    if (!j["ep"].is_number_unsigned()) throw bad("\"ep\" must be a non-negative integer");
    if (!j["t"].is_number() || !j["r_base"].is_number() || !j["r_shape"].is_number()) {
      throw bad("\"t\", \"r_base\" and \"r_shape\" must be numbers");
    }
    if (!j["humans"].is_array()) throw bad("\"humans\" must be an array");
    StepLog st;
    st.t = j["t"].get<double>();
    st.robot = point(j["robot"]);
    for (const auto &h : j["humans"]) st.humans.push_back(point(h));
    st.r_base = j["r_base"].get<double>();
    st.r_shape = j["r_shape"].get<double>();
    if (j["d"].is_null()) {
      st.d = std::numeric_limits<double>::infinity();
    } else if (j["d"].is_number()) {
      st.d = j["d"].get<double>();
    } else {
      throw bad("\"d\" must be a number or null");
    }
    const std::size_t ep = j["ep"].get<std::size_t>();
    auto [it, inserted] = slot.try_emplace(ep, episodes.size());
    if (inserted) episodes.push_back({ep, {}});
    episodes[it->second].steps.push_back(std::move(st));
  }
  return episodes;
}

Trajectory trajectory_from_log(const LoggedEpisode &episode, double dt) {
  Trajectory t;
  t.dt = dt;
  for (const auto &st : episode.steps) t.points.push_back(st.robot);
  return t;
}

std::string plot_svg(const LoggedEpisode &episode, const PlotStyle &style) {
  const double scale = 40.0;  // px per metre
  const double pad = 1.0;     // m
  double xmin = style.robot_goal.x, xmax = style.robot_goal.x;
  double ymin = style.robot_goal.y, ymax = style.robot_goal.y;
  std::size_t n_humans = 0;
  for (const auto &st : episode.steps) {
    auto grow = [&](const Vec2 &p) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    };
    grow(st.robot);
    for (const auto &h : st.humans) grow(h);
    n_humans = std::max(n_humans, st.humans.size());
  }
  xmin -= pad;
  ymin -= pad;
  xmax += pad;
  ymax += pad;
  const double width = (xmax - xmin) * scale;
  const double height = (ymax - ymin) * scale;
  auto sx = [&](double x) { return num((x - xmin) * scale, 2); };
  auto sy = [&](double y) { return num((ymax - y) * scale, 2); };
  auto len = [&](double m) { return num(m * scale, 2); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width, 0) << "\" height=\""
     << num(height, 0) << "\" viewBox=\"0 0 " << num(width, 2) << ' ' << num(height, 2) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<title>episode " << episode.ep << "</title>\n";

  static const char *palette[] = {"#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2",
                                  "#7f7f7f", "#bcbd22", "#17becf", "#ff7f0e"};
  for (std::size_t h = 0; h < n_humans; ++h) {
    const char *colour = palette[h % (sizeof palette / sizeof *palette)];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    const Vec2 *last = nullptr;
    for (const auto &st : episode.steps) {
      if (h < st.humans.size()) {
        os << sx(st.humans[h].x) << ',' << sy(st.humans[h].y) << ' ';
        last = &st.humans[h];
      }
    }
    os << "\"/>\n";
    if (last != nullptr) {
      os << "<circle cx=\"" << sx(last->x) << "\" cy=\"" << sy(last->y) << "\" r=\"" << len(style.human_radius)
         << "\" fill=\"" << colour << "\" fill-opacity=\"0.5\"/>\n";
      os << "<circle cx=\"" << sx(last->x) << "\" cy=\"" << sy(last->y) << "\" r=\""
         << len(style.human_radius + style.discomfort_dist) << "\" fill=\"none\" stroke=\"" << colour
         << "\" stroke-dasharray=\"4 3\"/>\n";
    }
  }

  if (!episode.steps.empty()) {
    os << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2.5\" points=\"";
    for (const auto &st : episode.steps) os << sx(st.robot.x) << ',' << sy(st.robot.y) << ' ';
    os << "\"/>\n";
    const Vec2 start = episode.steps.front().robot;
    const Vec2 end = episode.steps.back().robot;
    const double half = 0.2;
    os << "<rect x=\"" << sx(start.x - half) << "\" y=\"" << sy(start.y + half) << "\" width=\"" << len(2 * half)
       << "\" height=\"" << len(2 * half) << "\" fill=\"#d62728\"/>\n";
    os << "<circle cx=\"" << sx(end.x) << "\" cy=\"" << sy(end.y) << "\" r=\"" << len(style.robot_radius)
       << "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
  }
  const Vec2 g = style.robot_goal;
  os << "<path d=\"M " << sx(g.x - 0.25) << ' ' << sy(g.y - 0.25) << " L " << sx(g.x + 0.25) << ' '
     << sy(g.y + 0.25) << " M " << sx(g.x - 0.25) << ' ' << sy(g.y + 0.25) << " L " << sx(g.x + 0.25) << ' '
     << sy(g.y - 0.25) << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace crowdbench
