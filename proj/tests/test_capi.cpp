// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "crowdbench/crowdbench.h"

namespace {

std::string take(char *s) {
  std::string out = s ? s : "";
  cb_string_free(s);
  return out;
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(cb_version(), "0.1.0");
  EXPECT_STREQ(cb_status_name(CB_OK), "ok");
  EXPECT_STRNE(cb_status_name(CB_ERR_INVALID_WEIGHTS), cb_status_name(CB_ERR_CONFIG));
}

TEST(CApi, CurvatureAndPenalty) {
  const double a[2] = {0, 0}, b[2] = {1, 0}, c[2] = {0, 1};
  double k = 0;
  ASSERT_EQ(cb_curvature(a, b, c, &k), CB_OK);
  EXPECT_NEAR(k, std::sqrt(2.0), 1e-12);
  double p = 1;
  ASSERT_EQ(cb_smoothness_penalty(std::log(2.0), 1.0, 0.5, &p), CB_OK);
  EXPECT_EQ(p, 0.0);
  EXPECT_EQ(cb_curvature(a, b, nullptr, &k), CB_ERR_INVALID_ARGUMENT);
  EXPECT_STRNE(cb_last_error(), "");
}

TEST(CApi, TrajectoryRatioAndWindows) {
  const double xy[] = {0, 0, 1, 0, 2, 0, 3, 0, 4, 0};
  cb_trajectory *t = nullptr;
  ASSERT_EQ(cb_trajectory_create(xy, 5, 0.25, &t), CB_OK);
  EXPECT_EQ(cb_trajectory_size(t), 5u);
  double r = -1;
  ASSERT_EQ(cb_discontinuity_ratio(t, std::log(2.0), &r), CB_OK);
  EXPECT_EQ(r, 0.0);
  char *json = nullptr;
  ASSERT_EQ(cb_curvature_windows_json(t, std::log(2.0), &json), CB_OK);
  const auto j = nlohmann::json::parse(take(json));
  EXPECT_EQ(j["windows"].size(), 2u);
  EXPECT_EQ(j["cdr"], 0.0);
  cb_trajectory_free(t);

  cb_trajectory *short_t = nullptr;
  ASSERT_EQ(cb_trajectory_create(xy, 3, 0.25, &short_t), CB_OK);
  EXPECT_EQ(cb_discontinuity_ratio(short_t, 0.7, &r), CB_ERR_INSUFFICIENT_POINTS);
  cb_trajectory_free(short_t);

  EXPECT_EQ(cb_trajectory_load_csv("/nonexistent.csv", &t), CB_ERR_IO);
  EXPECT_NE(std::string(cb_last_error()).find("/nonexistent.csv"), std::string::npos);
}

TEST(CApi, Scoring) {
  cb_scoring_config cfg;
  cb_scoring_defaults(0, &cfg);
  EXPECT_EQ(cfg.tau_S, 0.05);
  const cb_metrics m{0.598, 0.014, 0.388, 31.88, 0.00796, 0.415, 0.025};
  cb_scores s;
  ASSERT_EQ(cb_score(&m, &cfg, &s), CB_OK);
  EXPECT_NEAR(s.comprehensive, 0.791, 0.002);
  EXPECT_EQ(s.efficiency_undefined, 0);
  cfg.weights.effic = 0.5;
  EXPECT_EQ(cb_score(&m, &cfg, &s), CB_ERR_INVALID_WEIGHTS);

  char *json = nullptr;
  char *table = nullptr;
  ASSERT_EQ(cb_score_text(R"({"f_saf":1,"f_suc":1,"f_comf":1,"f_traj":1,"f_effic":1})", nullptr, "low", &json,
                          &table),
            CB_OK);
  EXPECT_NEAR(nlohmann::json::parse(take(json))["comprehensive"].get<double>(), 1.0, 1e-12);
  EXPECT_NE(take(table).find("comprehensive"), std::string::npos);
}

TEST(CApi, RunLifecycle) {
  cb_run *run = nullptr;
  ASSERT_EQ(cb_run_create(R"({"preset":"low","seeds":[0],"episodes_per_seed":3,"record_steps":true})", &run),
            CB_OK);
  char *early = nullptr;
  EXPECT_EQ(cb_run_emit_report(run, "json", &early), CB_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(cb_last_error()).find("not been executed"), std::string::npos);
  ASSERT_EQ(cb_run_execute(run, 1), CB_OK);
  size_t excluded = 99;
  ASSERT_EQ(cb_run_excluded(run, &excluded), CB_OK);
  EXPECT_EQ(excluded, 0u);
  cb_metrics m;
  cb_scores s;
  ASSERT_EQ(cb_run_summary(run, &m, &s), CB_OK);
  EXPECT_NEAR(m.sr + m.cr + m.tr, 1.0, 1e-9);
  for (const char *fmt : {"json", "csv", "markdown"}) {
    char *text = nullptr;
    ASSERT_EQ(cb_run_emit_report(run, fmt, &text), CB_OK) << fmt;
    EXPECT_FALSE(take(text).empty());
  }
  char *text = nullptr;
  EXPECT_EQ(cb_run_emit_report(run, "xml", &text), CB_ERR_INVALID_ARGUMENT);

  const auto log = (std::filesystem::temp_directory_path() / "cb_capi_log.jsonl").string();
  ASSERT_EQ(cb_run_write_log(run, log.c_str()), CB_OK);
  cb_trajectory *t = nullptr;
  ASSERT_EQ(cb_trajectory_load_log(log.c_str(), 2, 0.25, &t), CB_OK);
  EXPECT_GE(cb_trajectory_size(t), 2u);
  cb_trajectory_free(t);
  char *svg = nullptr;
  ASSERT_EQ(cb_plot_from_log(log.c_str(), 0, nullptr, &svg), CB_OK);
  EXPECT_EQ(take(svg).rfind("<svg", 0), 0u);
  std::filesystem::remove(log);
  cb_run_free(run);
}

TEST(CApi, ConfigErrors) {
  cb_run *run = nullptr;
  EXPECT_EQ(cb_run_create("{not json", &run), CB_ERR_CONFIG);
  EXPECT_EQ(run, nullptr);
  EXPECT_EQ(cb_run_create(R"({"bogus": 1})", &run), CB_ERR_CONFIG);
  EXPECT_NE(std::string(cb_last_error()).find("bogus"), std::string::npos);
  EXPECT_EQ(cb_run_create(R"({"scoring":{"weights":{"saf":0.9}}})", &run), CB_ERR_INVALID_WEIGHTS);
}

TEST(CApi, ProtocolCheck) {
  const std::string cmd = std::string(CB_ECHO_POLICY) + " --mode constant --vx 0.3 --vy -0.4";
  char *transcript = nullptr;
  ASSERT_EQ(cb_protocol_check(cmd.c_str(), 1000, &transcript), CB_OK);
  EXPECT_NE(take(transcript).find("handshake ok"), std::string::npos);
  const std::string bad = std::string(CB_ECHO_POLICY) + " --mode garbage";
  EXPECT_EQ(cb_protocol_check(bad.c_str(), 1000, nullptr), CB_ERR_POLICY_FAILURE);
}

}  // namespace
