// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <set>
#include <thread>
#include <tuple>

#include "errors.hpp"
#include "rng.hpp"

namespace crowdbench {

const char *outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::Collision: return "collision";
    case Outcome::Timeout: return "timeout";
    case Outcome::ProtocolFailure: return "protocol_failure";
  }
  return "unknown";
}

void RunSpec::validate() const {
  scenario.validate();
  if (episodes_per_seed < 1) {
    throw Error(ErrorCode::Config, "episodes_per_seed must be >= 1");
  }
  if (seeds.empty()) {
    throw Error(ErrorCode::Config, "at least one seed is required");
  }
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw Error(ErrorCode::Config, "seeds must be distinct");
  }
  if (!(smoothness.tau > 0.0) || !(smoothness.eps_len > 0.0)) {
    throw Error(ErrorCode::Config, "smoothness tau and eps_len must be > 0");
  }
  validate_weights(scoring.weights);
  if (policy.kind == PolicyKind::External && policy.command.empty()) {
    throw Error(ErrorCode::Config, "external policy needs a command");
  }
}

namespace {

StepLog snapshot(const World &world, double r_base, double r_shape, double d) {
  StepLog log;
  log.t = world.time();
  log.robot = world.robot().position;
  log.humans.reserve(world.humans().size());
  for (const auto &h : world.humans()) {
    log.humans.push_back(h.position);
  }
  log.r_base = r_base;
  log.r_shape = r_shape;
  log.d = d;
  return log;
}

}  // namespace

EpisodeRecord run_episode(const RunSpec &spec, std::uint64_t seed, std::size_t index, std::size_t ep) {
  EpisodeRecord rec;
  rec.seed = seed;
  rec.index = index;
  rec.ep = ep;

  World world = World::generate(spec.scenario, episode_seed(seed, index));
  auto policy = make_policy(spec.policy, spec.scenario);

  rec.min_sep = std::numeric_limits<double>::infinity();
  if (spec.record_steps) {
    rec.steps.push_back(snapshot(world, 0.0, 0.0, min_separation(world.robot(), world.humans())));
  }

  Terminal terminal = Terminal::None;
  while (terminal == Terminal::None) {
    const Vec2 action = policy->decide(world.observe());
    const StepOutcome out = world.step(action);
    terminal = out.terminal;

    rec.min_sep = std::min(rec.min_sep, out.d_min);
    if (out.d_min >= 0.0 && out.d_min < spec.scenario.discomfort_dist) {
      ++rec.discomfort_steps;
    }
    ++rec.total_steps;
    rec.return_base += out.reward_base;
    rec.return_shaping += out.reward_shaping;
    if (spec.record_steps) {
      rec.steps.push_back(snapshot(world, out.reward_base, out.reward_shaping, out.d_min));
    }
  }

  switch (terminal) {
    case Terminal::Goal: rec.outcome = Outcome::Success; break;
    case Terminal::Collision: rec.outcome = Outcome::Collision; break;
    default: rec.outcome = Outcome::Timeout; break;
  }
  rec.nav_time = world.time();
  rec.trajectory.points = world.robot_path();
  rec.trajectory.dt = spec.scenario.dt;
  if (rec.trajectory.points.size() >= 4) {
    rec.cdr = discontinuity_ratio(rec.trajectory, spec.smoothness);
  }
  return rec;
}

BatchMetrics batch_metrics(const std::vector<const EpisodeRecord *> &input, std::size_t *cdr_undefined) {
  std::vector<const EpisodeRecord *> records;
  records.reserve(input.size());
  for (const auto *r : input) {
    if (r->outcome != Outcome::ProtocolFailure) {
      records.push_back(r);
    }
  }
  if (records.empty()) {
    throw Error(ErrorCode::EmptyBatch, "no usable episodes to aggregate");
  }
  // A fixed summation order keeps the fold independent of input order.
  std::sort(records.begin(), records.end(), [](const EpisodeRecord *a, const EpisodeRecord *b) {
    return std::tie(a->seed, a->index) < std::tie(b->seed, b->index);
  });

  std::size_t success = 0, collision = 0, timeout = 0, discomfort = 0, steps = 0, cdr_count = 0;
  double time_sum = 0.0, sep_sum = 0.0, cdr_sum = 0.0;
  for (const auto *r : records) {
    switch (r->outcome) {
      case Outcome::Success:
        ++success;
        time_sum += r->nav_time;
        break;
      case Outcome::Collision: ++collision; break;
      default: ++timeout; break;
    }
    discomfort += r->discomfort_steps;
    steps += r->total_steps;
    sep_sum += r->min_sep;
    if (r->cdr) {
      cdr_sum += *r->cdr;
      ++cdr_count;
    }
  }

  const double n = static_cast<double>(records.size());
  BatchMetrics m;
  m.sr = static_cast<double>(success) / n;
  m.cr = static_cast<double>(collision) / n;
  m.tr = static_cast<double>(timeout) / n;
  m.at = success > 0 ? time_sum / static_cast<double>(success) : 0.0;
  m.dr = steps > 0 ? static_cast<double>(discomfort) / static_cast<double>(steps) : 0.0;
  m.md = sep_sum / n;
  m.cdr = cdr_count > 0 ? cdr_sum / static_cast<double>(cdr_count) : 0.0;
  if (cdr_undefined != nullptr) {
    *cdr_undefined = records.size() - cdr_count;
  }
  return m;
}

namespace {

template <typename T, typename Field>
double sample_stddev(const std::vector<T> &items, Field field) {
  if (items.size() < 2) {
    return 0.0;
  }
  double mean = 0.0;
  for (const auto &it : items) mean += field(it);
  mean /= static_cast<double>(items.size());
  double ss = 0.0;
  for (const auto &it : items) {
    const double d = field(it) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(items.size() - 1));
}

template <typename T, typename Field>
double mean_of(const std::vector<T> &items, Field field) {
  double sum = 0.0;
  for (const auto &it : items) sum += field(it);
  return items.empty() ? 0.0 : sum / static_cast<double>(items.size());
}

}  // namespace

AggregateReport aggregate(const std::vector<EpisodeRecord> &records, const ScoringConfig &scoring) {
  if (records.empty()) {
    throw Error(ErrorCode::EmptyBatch, "no episodes to aggregate");
  }
  std::vector<const EpisodeRecord *> sorted;
  sorted.reserve(records.size());
  for (const auto &r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const EpisodeRecord *a, const EpisodeRecord *b) {
    return std::tie(a->ep, a->seed, a->index) < std::tie(b->ep, b->seed, b->index);
  });

  AggregateReport report;
  report.episodes = sorted.size();

  // Seeds appear in batch order.
  std::vector<std::uint64_t> seed_order;
  std::map<std::uint64_t, std::vector<const EpisodeRecord *>> by_seed;
  for (const auto *r : sorted) {
    if (r->outcome == Outcome::ProtocolFailure) {
      ++report.excluded_episodes;
    }
    auto [it, inserted] = by_seed.try_emplace(r->seed);
    if (inserted) seed_order.push_back(r->seed);
    it->second.push_back(r);
  }

  report.pooled = batch_metrics(sorted, &report.cdr_undefined_episodes);

  for (std::uint64_t seed : seed_order) {
    const auto &group = by_seed[seed];
    SeedReport sr;
    sr.seed = seed;
    sr.episodes = group.size();
    sr.excluded = static_cast<std::size_t>(std::count_if(
        group.begin(), group.end(), [](const auto *r) { return r->outcome == Outcome::ProtocolFailure; }));
    if (sr.excluded == sr.episodes) {
      continue;  // nothing to score for this seed
    }
    sr.metrics = batch_metrics(group);
    sr.scores = comprehensive_score(sr.metrics, scoring);
    report.per_seed.push_back(sr);
  }

  const auto &ps = report.per_seed;
  BatchMetrics &sm = report.seed_mean;
  std::size_t with_success = 0, with_cdr = 0;
  for (const auto &s : ps) {
    sm.sr += s.metrics.sr;
    sm.cr += s.metrics.cr;
    sm.tr += s.metrics.tr;
    sm.dr += s.metrics.dr;
    sm.md += s.metrics.md;
    if (s.metrics.sr > 0.0) {
      sm.at += s.metrics.at;
      ++with_success;
    }
    const bool cdr_defined = std::any_of(by_seed[s.seed].begin(), by_seed[s.seed].end(), [](const auto *r) {
      return r->outcome != Outcome::ProtocolFailure && r->cdr.has_value();
    });
    if (cdr_defined) {
      sm.cdr += s.metrics.cdr;
      ++with_cdr;
    }
  }
  const double n_seeds = static_cast<double>(ps.size());
  sm.sr /= n_seeds;
  sm.cr /= n_seeds;
  sm.tr /= n_seeds;
  sm.dr /= n_seeds;
  sm.md /= n_seeds;
  sm.at = with_success > 0 ? sm.at / static_cast<double>(with_success) : 0.0;
  sm.cdr = with_cdr > 0 ? sm.cdr / static_cast<double>(with_cdr) : 0.0;
  report.scores = comprehensive_score(sm, scoring);

  auto metric_std = [&](double BatchMetrics::*f) {
    return sample_stddev(ps, [f](const SeedReport &s) { return s.metrics.*f; });
  };
  auto score_std = [&](double ScoreBreakdown::*f) {
    return sample_stddev(ps, [f](const SeedReport &s) { return s.scores.*f; });
  };
  auto score_mean = [&](double ScoreBreakdown::*f) {
    return mean_of(ps, [f](const SeedReport &s) { return s.scores.*f; });
  };
  for (auto f : {&BatchMetrics::sr, &BatchMetrics::cr, &BatchMetrics::tr, &BatchMetrics::at,
                 &BatchMetrics::dr, &BatchMetrics::md, &BatchMetrics::cdr}) {
    report.stddev_metrics.*f = metric_std(f);
  }
  for (auto f : {&ScoreBreakdown::f_saf, &ScoreBreakdown::f_suc, &ScoreBreakdown::f_comf,
                 &ScoreBreakdown::f_traj, &ScoreBreakdown::f_effic, &ScoreBreakdown::f_comf_dn,
                 &ScoreBreakdown::f_comf_md, &ScoreBreakdown::comprehensive}) {
    report.stddev_scores.*f = score_std(f);
    report.mean_seed_scores.*f = score_mean(f);
  }
  return report;
}

BatchResult run_batch(const RunSpec &spec, unsigned workers) {
  spec.validate();
  struct Job {
    std::uint64_t seed;
    std::size_t index;
  };
  std::vector<Job> jobs;
  jobs.reserve(spec.seeds.size() * spec.episodes_per_seed);
  for (std::uint64_t seed : spec.seeds) {
    for (std::size_t i = 0; i < spec.episodes_per_seed; ++i) {
      jobs.push_back({seed, i});
    }
  }

  BatchResult result;
  result.records.resize(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t ep = next.fetch_add(1);
      if (ep >= jobs.size()) {
        return;
      }
      try {
        result.records[ep] = run_episode(spec, jobs[ep].seed, jobs[ep].index, ep);
      } catch (const Error &e) {
        if (e.code() != ErrorCode::ExternalPolicyFailure) {
          errors[ep] = std::current_exception();
          continue;
        }
        EpisodeRecord &rec = result.records[ep];
        rec = EpisodeRecord{};
        rec.seed = jobs[ep].seed;
        rec.index = jobs[ep].index;
        rec.ep = ep;
        rec.outcome = Outcome::ProtocolFailure;
        rec.failure = e.what();
      } catch (...) {
        errors[ep] = std::current_exception();
      }
    }
  };

  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
  }

  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  if (std::all_of(result.records.begin(), result.records.end(),
                  [](const EpisodeRecord &r) { return r.outcome == Outcome::ProtocolFailure; })) {
    throw Error(ErrorCode::ExternalPolicyFailure, "every episode failed: " + result.records.front().failure);
  }
  result.report = aggregate(result.records, spec.scoring);
  return result;
}

}  // namespace crowdbench
