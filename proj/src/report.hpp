// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors
//
// Report, log and plot emitters for batch results. Every emitter is a pure
// function of its inputs so repeated runs give identical bytes.

#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "config_io.hpp"

namespace crowdbench {

Json metrics_json(const BatchMetrics &m);
Json scores_json(const ScoreBreakdown &s);

/// Input of the score command: either raw metrics or the five component
/// scores, which then only need weighting.
struct ScoreInput {
  bool precomputed{false};
  BatchMetrics metrics;
  ScoreBreakdown scores;
};

/// Accepts a JSON object (metric keys sr..cdr or M_sr..M_cdr, component keys
/// f_saf..f_effic, a {"metrics": ...} wrapper, or a report.json whose
/// "seed_mean" is used) or a CSV with a header row; the "all" row is used
/// when present, else the first data row. When both metrics and component
/// scores are present the metrics win.
ScoreInput parse_score_input(const std::string &text);

ScoreBreakdown score_input(const ScoreInput &input, const ScoringConfig &cfg);

/// Full report including the effective configuration.
Json report_json(const BatchResult &result, const RunSpec &spec);

/// Header plus one row per seed and a final "all" row, rates as fractions.
std::string report_csv(const AggregateReport &report);

/// Human-readable summary table; rates shown in percent.
std::string report_markdown(const AggregateReport &report);

std::string score_table(const ScoreBreakdown &scores);

/// One JSON line per step, including the t = 0 state. Records must have been
/// produced with record_steps.
std::string trajectory_log_jsonl(const std::vector<EpisodeRecord> &records);
void write_trajectory_log(std::ostream &out, const std::vector<EpisodeRecord> &records);

struct LoggedEpisode {
  std::size_t ep{0};
  std::vector<StepLog> steps;
};

/// Groups log lines by "ep" in order of first appearance. A null "d" reads
/// back as +inf. Throws Error{Config} naming the offending line.
std::vector<LoggedEpisode> parse_trajectory_log(std::istream &in);

/// Robot positions of one logged episode.
Trajectory trajectory_from_log(const LoggedEpisode &episode, double dt);

struct PlotStyle {
  Point2 robot_goal{0.0, 4.0};
  double robot_radius{0.3};
  double human_radius{0.3};
  double discomfort_dist{0.5};
};

/// Agent paths, start and goal markers, and a discomfort ring around each
/// human's final position.
std::string plot_svg(const LoggedEpisode &episode, const PlotStyle &style);

}  // namespace crowdbench
