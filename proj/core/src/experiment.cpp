#include "ulab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ulab/empirical.hpp"
#include "ulab/error.hpp"

#ifndef ULAB_VERSION
#define ULAB_VERSION "0.0.0"
#endif

namespace ulab {

namespace {

using Clock = std::chrono::steady_clock;

bool needs_class(const ExperimentConfig& cfg) {
  if (cfg.protocol == Protocol::kOnline) {
    return cfg.online.rule == OnlineRuleKind::kAggregate && cfg.online.aggregate.expert == ExpertKind::kWrapper;
  }
  return cfg.learner.rule != RuleKind::kNearestNeighbor && cfg.learner.rule != RuleKind::kMemorize;
}

RuleContext make_context(const ExperimentConfig& cfg) {
  RuleContext ctx{cfg.loss.space(), cfg.learner.schedule, nullptr, cfg.learner.fallback};
  if (needs_class(cfg)) ctx.cls = std::make_shared<const FunctionClass>(build_class_schedule(cfg));
  return ctx;
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

TraceRecord summarize(std::uint64_t seed, std::uint64_t n, const std::vector<double>& losses, double window) {
  TraceRecord rec;
  rec.seed = seed;
  rec.n = n;
  double sum = 0.0;
  for (double l : losses) sum += l;
  rec.avg_loss = losses.empty() ? 0.0 : sum / static_cast<double>(losses.size());
  rec.wmax_loss = windowed_max(losses, window);
  return rec;
}

std::vector<TraceRecord> run_inductive(const ExperimentConfig& cfg, const RuleContext& ctx,
                                       const TargetFunction& target, std::uint64_t seed,
                                       const LearnerOverrides& hooks) {
  std::vector<TraceRecord> out;
  const LossSpace space = ctx.space;
  for (std::uint64_t n : cfg.train_sizes) {
    const auto start = Clock::now();
    ProcessStream stream = build_process(cfg, seed);
    std::vector<Point> xs = stream.take(n);
    std::vector<Value> ys;
    ys.reserve(n);
    for (const auto& x : xs) ys.push_back(target(x));
    auto learner = hooks.inductive ? hooks.inductive() : make_inductive(cfg.learner.rule, ctx);
    learner->fit(xs, ys);
    xs.clear();
    xs.shrink_to_fit();
    std::vector<double> losses;
    losses.reserve(cfg.eval_horizon);
    for (std::uint64_t t = 0; t < cfg.eval_horizon; ++t) {
      const Point x = stream.next();
      losses.push_back(space.loss(learner->predict(x), target(x)));
    }
    TraceRecord rec = summarize(seed, n, losses, cfg.window);
    if (cfg.timing) rec.ms = elapsed_ms(start);
    out.push_back(rec);
  }
  return out;
}

std::vector<TraceRecord> run_self_adaptive(const ExperimentConfig& cfg, const RuleContext& ctx,
                                           const TargetFunction& target, std::uint64_t seed,
                                           const LearnerOverrides& hooks) {
  std::vector<TraceRecord> out;
  const LossSpace space = ctx.space;
  for (std::uint64_t n : cfg.train_sizes) {
    const auto start = Clock::now();
    ProcessStream stream = build_process(cfg, seed);
    std::vector<Point> xs = stream.take(n);
    std::vector<Value> ys;
    ys.reserve(n);
    for (const auto& x : xs) ys.push_back(target(x));
    auto learner = hooks.self_adaptive ? hooks.self_adaptive() : make_self_adaptive(cfg.learner.rule, ctx);
    learner->fit(xs, ys);
    std::vector<double> losses;
    losses.reserve(cfg.eval_horizon + 1);
    // m = n .. n + M: predict X_{m+1} having seen X_{1:m}, labels only up to n.
    for (std::uint64_t m = n; m <= n + cfg.eval_horizon; ++m) {
      const Point x = stream.next();
      losses.push_back(space.loss(learner->predict(x), target(x)));
      if (m < n + cfg.eval_horizon) learner->observe(x);
    }
    TraceRecord rec = summarize(seed, n, losses, cfg.window);
    if (cfg.timing) rec.ms = elapsed_ms(start);
    out.push_back(rec);
  }
  return out;
}

std::vector<TraceRecord> run_online(const ExperimentConfig& cfg, const RuleContext& ctx,
                                    const TargetFunction& target, std::uint64_t seed) {
  std::vector<TraceRecord> out;
  const LossSpace space = ctx.space;
  const auto start = Clock::now();
  ProcessStream stream = build_process(cfg, seed);
  auto learner = make_online(cfg.online.rule, cfg.online.aggregate, ctx);
  PrefixLossSeries series;
  std::size_t next = 0;
  const std::uint64_t horizon = cfg.train_sizes.back();
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const Point x = stream.next();
    const Value y = target(x);
    series.push(space.loss(learner->predict(x), y));
    learner->feed(y);
    if (t == cfg.train_sizes[next]) {
      TraceRecord rec;
      rec.seed = seed;
      rec.n = t;
      rec.avg_loss = series.average(t);
      const std::uint64_t width = static_cast<std::uint64_t>(std::ceil(cfg.window * static_cast<double>(t)));
      double best = 0.0;
      for (std::uint64_t s = t - std::min(width, t) + 1; s <= t; ++s) best = std::max(best, series.average(s));
      rec.wmax_loss = best;
      if (cfg.timing) rec.ms = elapsed_ms(start);
      out.push_back(rec);
      ++next;
    }
  }
  return out;
}

std::vector<TraceRecord> run_seed(const ExperimentConfig& cfg, const RuleContext& ctx, const TargetFunction& target,
                                  std::uint64_t seed, const LearnerOverrides& hooks) {
  switch (cfg.protocol) {
    case Protocol::kInductive: return run_inductive(cfg, ctx, target, seed, hooks);
    case Protocol::kSelfAdaptive: return run_self_adaptive(cfg, ctx, target, seed, hooks);
    case Protocol::kOnline: return run_online(cfg, ctx, target, seed);
  }
  return {};
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string version() { return ULAB_VERSION; }

double windowed_max(const std::vector<double>& losses, double fraction) {
  const std::uint64_t total = losses.size();
  if (total == 0) return 0.0;
  const auto width = std::min<std::uint64_t>(
      total, std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(fraction * static_cast<double>(total)))));
  const std::uint64_t first = total - width + 1;
  double sum = 0.0;
  double best = 0.0;
  for (std::uint64_t t = 1; t <= total; ++t) {
    sum += losses[t - 1];
    if (t >= first) best = std::max(best, sum / static_cast<double>(t));
  }
  return best;
}

std::uint64_t required_horizon(const ExperimentConfig& cfg) {
  if (cfg.train_sizes.empty()) return 0;
  const std::uint64_t n = cfg.train_sizes.back();
  switch (cfg.protocol) {
    case Protocol::kInductive: return n + cfg.eval_horizon;
    case Protocol::kSelfAdaptive: return n + cfg.eval_horizon + 1;
    case Protocol::kOnline: return n;
  }
  return n;
}

ExperimentTrace run_experiment(const ExperimentConfig& cfg, unsigned jobs) {
  return run_experiment(cfg, jobs, LearnerOverrides{});
}

ExperimentTrace run_experiment(const ExperimentConfig& cfg, unsigned jobs, const LearnerOverrides& overrides) {
  const std::uint64_t horizon = required_horizon(cfg);
  if (horizon > cfg.caps.max_steps) {
    throw ResourceError("run needs " + std::to_string(horizon) + " stream steps, cap is " +
                        std::to_string(cfg.caps.max_steps) + " (caps.max_steps)");
  }
  if (cfg.process.kind == ProcessKind::kNnKiller && horizon > kNnKillerHorizon) {
    throw ResourceError("nn_killer streams stop at t = " + std::to_string(kNnKillerHorizon));
  }
  if (cfg.seeds.empty()) throw ConfigError("seeds: required");

  ExperimentTrace trace;
  trace.digest = config_digest(cfg);
  trace.version = version();
  trace.protocol = to_string(cfg.protocol);
  trace.warnings = cfg.warnings;

  const RuleContext ctx = make_context(cfg);
  const TargetFunction target = build_target(cfg);
  std::vector<std::vector<TraceRecord>> slots(cfg.seeds.size());
  std::vector<std::exception_ptr> failures(cfg.seeds.size());

  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cfg.seeds.size())));
  std::size_t cursor = 0;
  std::mutex lock;
  auto work = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> g(lock);
        if (cursor >= cfg.seeds.size()) return;
        i = cursor++;
      }
      try {
        slots[i] = run_seed(cfg, ctx, target, cfg.seeds[i], overrides);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  for (auto& s : slots) trace.records.insert(trace.records.end(), s.begin(), s.end());
  std::stable_sort(trace.records.begin(), trace.records.end(), [](const TraceRecord& a, const TraceRecord& b) {
    return a.seed != b.seed ? a.seed < b.seed : a.n < b.n;
  });
  return trace;
}

void write_trace_csv(const ExperimentTrace& trace, std::ostream& out) {
  out << "seed,n,avg_loss,wmax_loss,ms\n";
  for (const auto& r : trace.records) {
    out << r.seed << ',' << r.n << ',' << format_number(r.avg_loss) << ',' << format_number(r.wmax_loss) << ','
        << format_number(r.ms) << '\n';
  }
}

std::string trace_csv(const ExperimentTrace& trace) {
  std::ostringstream out;
  write_trace_csv(trace, out);
  return out.str();
}

std::string summary_json(const ExperimentTrace& trace) {
  nlohmann::json j{
      {"digest", trace.digest},
      {"version", trace.version},
      {"protocol", trace.protocol},
      {"records", trace.records.size()},
      {"warnings", trace.warnings},
      {"wmax_loss", "largest prefix average over the final window fraction of each evaluation window"},
  };
  return j.dump(2) + "\n";
}

void write_trace(const ExperimentTrace& trace, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
  auto write = [](const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << body;
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
  };
  write(fs::path(dir) / "trace.csv", trace_csv(trace));
  write(fs::path(dir) / "summary.json", summary_json(trace));
}

}  // namespace ulab
