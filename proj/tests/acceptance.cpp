// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors
//
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed here and not configurable.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bench.hpp"
#include "checks.hpp"
#include "errors.hpp"
#include "oracles.hpp"
#include "policies.hpp"
#include "scoring.hpp"
#include "trajmetric.hpp"
#include "world.hpp"

using namespace crowdbench;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

// Collects sub-check results for one criterion.
struct Criterion {
  explicit Criterion(std::string n) : name(std::move(n)) {}

  std::string name;
  std::vector<std::string> notes;
  bool ok{true};
  Clock::time_point start{Clock::now()};

  void check(bool cond, const std::string &what) {
    if (!cond) {
      ok = false;
      notes.push_back("FAILED " + what);
    }
  }
  void note(const std::string &s) { notes.push_back(s); }
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start).count(); }

  void report() {
    std::printf("%s  %s", ok ? "PASS" : "FAIL", name.c_str());
    if (!notes.empty()) {
      std::printf("  [");
      for (std::size_t i = 0; i < notes.size(); ++i) std::printf("%s%s", i ? "; " : "", notes[i].c_str());
      std::printf("]");
    }
    std::printf("\n");
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }
};

std::string fmt(const char *f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool rel_near(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

void scoring_goldens() {
  Criterion c{"scoring goldens"};
  const auto low = ScoringConfig::for_preset(DensityPreset::Low);

  const BatchMetrics sfm{0.598, 0.014, 0.388, 31.88, 0.00796, 0.415, 0.025};
  const auto s = comprehensive_score(sfm, low);
  c.check(near(s.comprehensive, 0.791, 0.002), "SFM low-density comprehensive " + fmt("%.5f", s.comprehensive));
  c.note("SFM F=" + fmt("%.5f", s.comprehensive));

  ScoreBreakdown pre;
  pre.f_saf = 0.516;
  pre.f_suc = 0.902;
  pre.f_comf = 0.606;
  pre.f_traj = 0.919;
  pre.f_effic = 0.596;
  apply_weights(pre, low.weights);
  c.check(near(pre.comprehensive, 0.681, 0.001), "precomputed sub-scores " + fmt("%.5f", pre.comprehensive));
  c.note("sub-scores F=" + fmt("%.5f", pre.comprehensive));

  const double ft = trajectory_score(0.01765, 10.0);
  c.check(near(ft, 0.837, 0.001), "F_traj(0.01765) " + fmt("%.5f", ft));
  const double fe = efficiency_score(13.686, 8.0);
  c.check(near(fe, 0.585, 0.001), "F_effic(13.686, 8) " + fmt("%.5f", fe));
  const double fc = comfort_score(0.00796, 0.415, 10.0, 0.5, 0.5).total;
  c.check(near(fc, 0.877, 0.002), "F_comf(SFM) " + fmt("%.5f", fc));
  c.check(safety_score(0.0, 0.05, 4.0) == 1.0, "F_saf(0) == 1");
  c.check(safety_score(0.05, 0.05, 4.0) == 0.5, "F_saf(tau_S) == 0.5");
  c.check(safety_score(0.1, 0.1, 4.0) == 0.5, "F_saf(tau_S high) == 0.5");
  c.check(c.seconds() < 1.0, "runtime < 1 s");
  c.note(fmt("%.3f s", c.seconds()));
  c.report();
}

Point2 on_circle(const Point2 &ctr, double r, double a) { return {ctr.x + r * std::cos(a), ctr.y + r * std::sin(a)}; }

void metric_properties() {
  Criterion c{"trajectory-metric property suite"};
  std::mt19937_64 gen(20260101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  int circles = 0, bad_circle = 0;
  while (circles < 1000) {
    const Point2 ctr{u(gen) * 20 - 10, u(gen) * 20 - 10};
    const double r = 0.1 * std::pow(1000.0, u(gen));
    const Point2 a = on_circle(ctr, r, u(gen) * kTwoPi), b = on_circle(ctr, r, u(gen) * kTwoPi),
                 d = on_circle(ctr, r, u(gen) * kTwoPi);
    if (std::min({distance(a, b), distance(b, d), distance(a, d)}) < 0.05 * r) continue;
    ++circles;
    const double k = circumcircle_curvature(a, b, d);
    bad_circle += (rel_near(k, 1.0 / r, 1e-9) && rel_near(k, oracle::curvature_by_circumcenter(a, b, d), 1e-9)) ? 0 : 1;
  }
  c.check(bad_circle == 0, std::to_string(bad_circle) + " of 1000 circles off 1/R by > 1e-9");

  int rigid = 0, bad_rigid = 0, bad_scale = 0, negative = 0;
  while (rigid < 1000) {
    const Point2 p[3] = {{u(gen) * 10 - 5, u(gen) * 10 - 5}, {u(gen) * 10 - 5, u(gen) * 10 - 5},
                         {u(gen) * 10 - 5, u(gen) * 10 - 5}};
    const double k = circumcircle_curvature(p[0], p[1], p[2]);
    negative += k < 0.0 ? 1 : 0;
    if (k < 1e-3) continue;
    ++rigid;
    const double th = u(gen) * kTwoPi;
    const Vec2 t{u(gen) * 20 - 10, u(gen) * 20 - 10};
    auto tf = [&](const Point2 &q) {
      return Point2{std::cos(th) * q.x - std::sin(th) * q.y + t.x, std::sin(th) * q.x + std::cos(th) * q.y + t.y};
    };
    bad_rigid += rel_near(circumcircle_curvature(tf(p[0]), tf(p[1]), tf(p[2])), k, 1e-9) ? 0 : 1;
    const double sc = 0.1 + u(gen) * 9.9;
    bad_scale += rel_near(circumcircle_curvature(p[0] * sc, p[1] * sc, p[2] * sc), k / sc, 1e-9) ? 0 : 1;
  }
  c.check(bad_rigid == 0, std::to_string(bad_rigid) + " rigid-transform mismatches");
  c.check(bad_scale == 0, std::to_string(bad_scale) + " scaling mismatches");
  c.check(negative == 0, "kappa >= 0");

  const SmoothnessConfig cfg;
  int bad_zero = 0;
  for (std::size_t n = 4; n <= 200; ++n) {
    std::vector<Point2> line, arc;
    const Vec2 dir{std::cos(0.1 * n), std::sin(0.1 * n)};
    const double r = 0.5 + 0.1 * static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      line.push_back(Point2{1.0, 2.0} + dir * (0.25 * static_cast<double>(i)));
      arc.push_back(on_circle({-1.0, 3.0}, r, 0.25 * static_cast<double>(i) / r));
    }
    bad_zero += discontinuity_ratio(line, cfg) == 0.0 ? 0 : 1;
    bad_zero += discontinuity_ratio(arc, cfg) == 0.0 ? 0 : 1;
    bad_zero += curvature_windows(line, cfg).size() == n - 3 ? 0 : 1;
  }
  c.check(bad_zero == 0, "straight/arc M_cdr != 0 or window count != N-3 in " + std::to_string(bad_zero) + " cases");

  int bad_mono = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Point2> pts{{0, 0}};
    const std::size_t n = 4 + static_cast<std::size_t>(u(gen) * 80);
    for (std::size_t i = 1; i < n; ++i) pts.push_back(pts.back() + Vec2{u(gen) * 0.6 - 0.3, u(gen) * 0.6 - 0.3});
    const auto windows = curvature_windows(pts, cfg);
    double prev = 2.0;
    for (double tau = 1e-3; tau < 1e3; tau *= 1.5) {
      const double r = discontinuity_ratio_from_windows(windows, tau);
      bad_mono += (r <= prev && r >= 0.0 && r <= 1.0) ? 0 : 1;
      prev = r;
    }
  }
  c.check(bad_mono == 0, std::to_string(bad_mono) + " tau-monotonicity violations");
  c.check(c.seconds() < 10.0, "runtime < 10 s");
  c.note(fmt("%.3f s", c.seconds()));
  c.report();
}

void reward_suite() {
  Criterion c{"reward suite"};
  c.check(base_reward(-0.01, false) == -0.25, "d=-0.01 -> -0.25");
  c.check(base_reward(0.1, false) == -0.05, "d=0.1 -> -0.05");
  c.check(base_reward(1.0, true) == 1.0, "goal, d=1 -> 1");
  c.check(std::abs(base_reward(0.2 - 1e-9, false)) <= 1e-9, "d=0.2-1e-9 -> ~0");
  c.check(smoothness_penalty(std::log(2.0), 1.0, 0.5) == 0.0, "penalty(ln 2) == 0");
  const auto r = checks::shaping_bound_check(4242, 10000);
  c.check(r.steps == 10000 && r.violations == 0, std::to_string(r.violations) + " shaped > base steps");
  c.note(std::to_string(r.steps) + " random steps, " + std::to_string(r.shaped_steps) + " shaped");
  c.report();
}

void motion_oracles() {
  Criterion c{"ORCA/SFM oracle checks"};
  const auto g = checks::orca_grid_check(77, 100, 400);
  c.check(g.instances == 100 && g.failures == 0, std::to_string(g.failures) + " LP/grid mismatches (" +
                                                     g.first_failure + ")");
  c.note("grid: worst |v_lp - pref| - grid best " + fmt("%.2e", g.worst_grid_excess) +
         " m/s, worst |v_lp - v_exact| " + fmt("%.1e", g.worst_gap) + " m/s, worst violation " +
         fmt("%.1e", g.worst_violation));
  const auto h = checks::humans_only_collisions(ScenarioConfig::preset(DensityPreset::Low), 0, 500);
  c.check(h.episodes == 500 && h.collision_episodes == 0,
          std::to_string(h.collision_episodes) + " humans-only episodes with collisions");
  c.note("humans-only: 500 episodes, min separation " + fmt("%.4f", h.worst_separation) + " m");
  c.report();
}

AggregateReport timed_batch(PolicyKind kind, DensityPreset preset, Criterion &c) {
  RunSpec spec;
  spec.scenario = ScenarioConfig::preset(preset);
  spec.scoring = ScoringConfig::for_preset(preset);
  spec.policy.kind = kind;
  spec.episodes_per_seed = 500;
  spec.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto t0 = Clock::now();
  auto res = run_batch(spec, 0);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const auto &m = res.report.seed_mean;
  c.check(secs < 600.0, std::string(policy_kind_name(kind)) + " batch runtime " + fmt("%.1f s", secs));
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s %s: sr %.3f cr %.3f tr %.3f at %.2f (%.1f s)", policy_kind_name(kind),
                preset == DensityPreset::Low ? "low" : "high", m.sr, m.cr, m.tr, m.at, secs);
  c.note(buf);
  return res.report;
}

void baseline_direction() {
  Criterion c{"baseline directional reproduction (10 seeds x 500)"};
  const auto orca_low = timed_batch(PolicyKind::OrcaRobot, DensityPreset::Low, c);
  const auto orca_high = timed_batch(PolicyKind::OrcaRobot, DensityPreset::High, c);
  const auto sfm_low = timed_batch(PolicyKind::SfmRobot, DensityPreset::Low, c);
  const auto sfm_high = timed_batch(PolicyKind::SfmRobot, DensityPreset::High, c);

  // Success within 10 points of 95.7 %, M_at within 3 s of 13.686 s.
  const auto &ol = orca_low.seed_mean;
  c.check(ol.sr >= 0.857 - 1e-12 && ol.sr <= 1.0, "ORCA low success " + fmt("%.3f", ol.sr) + " outside [0.857, 1]");
  c.check(std::abs(ol.at - 13.686) <= 3.0, "ORCA low M_at " + fmt("%.2f", ol.at) + " outside 13.686 +- 3");
  // "Substantially above": at least double and at least 5 points higher.
  const auto &oh = orca_high.seed_mean;
  c.check(oh.cr >= 2.0 * ol.cr && oh.cr - ol.cr >= 0.05,
          "ORCA high collisions " + fmt("%.3f", oh.cr) + " not substantially above low " + fmt("%.3f", ol.cr));
  c.check(oh.tr > 0.0, "ORCA high timeout rate > 0");
  c.check(sfm_high.seed_mean.tr > sfm_low.seed_mean.tr, "SFM timeout high " + fmt("%.3f", sfm_high.seed_mean.tr) +
                                                              " not above low " + fmt("%.3f", sfm_low.seed_mean.tr));
  c.report();
}

int run_command(const std::string &cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism() {
  Criterion c{"determinism (byte-identical reports and logs)"};
  const fs::path root = fs::temp_directory_path() / "cb_acceptance_det";
  fs::remove_all(root);
  fs::create_directories(root);
  struct Variant {
    std::string name;
    std::string args;
  };
  const std::vector<Variant> cases{
      {"orca-high", "--preset high --policy orca --seeds 3 --episodes 20"},
      {"sfm-low", "--preset low --policy sfm --seeds 3 --episodes 20"},
  };
  for (const auto &v : cases) {
    std::vector<fs::path> outs;
    for (const char *workers : {"1", "1", "2", "3"}) {
      const fs::path out = root / (v.name + "_" + std::to_string(outs.size()));
      const std::string cmd = std::string(CB_CLI) + " run " + v.args + " --workers " + workers + " --out " +
                              out.string() + " > /dev/null 2>&1";
      c.check(run_command(cmd) == 0, v.name + " run exit status");
      outs.push_back(out);
    }
    for (const char *file : {"report.json", "trajectories.jsonl", "report.csv"}) {
      const auto first = slurp(outs[0] / file);
      c.check(!first.empty(), v.name + " " + file + " empty");
      for (std::size_t i = 1; i < outs.size(); ++i) {
        c.check(slurp(outs[i] / file) == first, v.name + " " + file + " differs (run " + std::to_string(i) + ")");
      }
    }
  }
  c.note("2 specs x 4 runs (workers 1, 1, 2, 3)");
  fs::remove_all(root);
  c.report();
}

void protocol_conformance() {
  std::printf(
      "NOTE  The IntentionGRU and IntentionGRU_Traj rows of the low- and high-density result tables come from\n"
      "      deep-RL policies trained for 2x10^7 steps. They are NOT reproducible at desk scale and are not\n"
      "      reproduced here. They are covered only by (a) the scoring golden tests on their published\n"
      "      sub-scores and (b) the external-policy protocol conformance checks below.\n");
  Criterion c{"non-reproducibility statement + external-policy protocol conformance"};
  const std::string echo = CB_ECHO_POLICY;
  Observation obs;
  obs.robot.position = {0, -4};
  obs.robot.goal = {0, 4};
  obs.robot.v_max = 1.0;
  auto expect_failure = [&](const std::function<void()> &fn, const std::string &what, const std::string &needle) {
    try {
      fn();
      c.check(false, what + " did not fail");
    } catch (const Error &e) {
      c.check(e.code() == ErrorCode::ExternalPolicyFailure, what + " wrong error code");
      c.check(std::string(e.what()).find(needle) != std::string::npos, what + " message: " + e.what());
    }
  };
  try {
    ExternalPolicy loop(echo + " --mode constant --vx 0.3 --vy -0.4", 0.25, 30.0);
    const Vec2 a = loop.decide(obs);
    c.check(a.x == 0.3 && a.y == -0.4, "echo loopback (0.3, -0.4)");
    ExternalPolicy fast(echo + " --mode constant --vx 2.0 --vy 0", 0.25, 30.0);
    const Vec2 b = fast.decide(obs);
    c.check(std::abs(norm(b) - 1.0) <= 1e-12 && b.y == 0.0 && b.x > 0.0, "speed-2 reply clamped to unit speed");
    c.check(protocol_check(echo).find("handshake ok") != std::string::npos, "protocol-check transcript");
  } catch (const std::exception &e) {
    c.check(false, std::string("echo policy: ") + e.what());
  }
  const auto t0 = Clock::now();
  expect_failure(
      [&] {
        ExternalPolicy slow(echo + " --mode slow --sleep 1.5", 0.25, 30.0);
        slow.decide(obs);
      },
      "slow policy", "timed out");
  const double waited = std::chrono::duration<double>(Clock::now() - t0).count();
  c.check(waited >= 0.9 && waited < 3.0, "timeout fired after " + fmt("%.2f s", waited));
  expect_failure(
      [&] {
        ExternalPolicy garbage(echo + " --mode garbage", 0.25, 30.0);
        garbage.decide(obs);
      },
      "garbage reply", "");
  c.check(run_command(std::string(CB_CLI) + " protocol-check \"" + echo + "\" > /dev/null 2>&1") == 0,
          "CLI protocol-check echo exit 0");
  c.check(run_command(std::string(CB_CLI) + " protocol-check \"" + echo + " --mode garbage\" > /dev/null 2>&1") == 3,
          "CLI protocol-check garbage exit 3");
  c.check(run_command(std::string(CB_CLI) + " protocol-check \"" + echo +
                      " --mode slow --sleep 1.5\" > /dev/null 2>&1") == 3,
          "CLI protocol-check slow exit 3");
  c.note("echo, clamp, timeout, garbage and CLI exit codes");
  c.report();
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  auto guarded = [](const char *name, void (*fn)()) {
    try {
      fn();
    } catch (const std::exception &e) {
      std::printf("FAIL  %s  [exception: %s]\n", name, e.what());
      ++failures;
    }
  };
  guarded("scoring goldens", scoring_goldens);
  guarded("trajectory-metric property suite", metric_properties);
  guarded("reward suite", reward_suite);
  guarded("ORCA/SFM oracle checks", motion_oracles);
  guarded("baseline directional reproduction", baseline_direction);
  guarded("determinism", determinism);
  guarded("protocol conformance", protocol_conformance);
  std::printf("%d criteria failed (%.1f s total)\n", failures,
              std::chrono::duration<double>(Clock::now() - t0).count());
  return failures == 0 ? 0 : 1;
}
