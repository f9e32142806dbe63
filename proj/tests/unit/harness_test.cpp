#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ulab/config.hpp"
#include "ulab/error.hpp"
#include "ulab/experiment.hpp"
#include "ulab/suite.hpp"

using namespace ulab;

namespace {

const char* kInductive = R"cfg({
  "protocol": "inductive",
  "process": {"kind": "iid", "params": {"space": "natural", "k": 5}},
  "target": {"kind": "kappa", "kappa": 0.40625, "partition": "singletons"},
  "loss": {"values": "binary", "kind": "zero_one"},
  "learner": {"rule": "memorize", "fallback": 0},
  "train_sizes": [1, 10, 100],
  "eval_horizon": 200,
  "seeds": [3, 1, 2]
})cfg";

const char* kSelfAdaptive = R"cfg({
  "protocol": "self_adaptive",
  "process": {"kind": "iid", "params": {"space": "unit"}},
  "target": {"kind": "simple", "cells": ["[0,1/4)"], "values": [1], "default": 0},
  "loss": {"values": "binary", "kind": "zero_one"},
  "learner": {"rule": "sual", "class": {"cap": 64}},
  "train_sizes": [4, 16, 64],
  "eval_horizon": 50,
  "seeds": [7, 8]
})cfg";

std::string with(const std::string& base, const std::string& key, const std::string& value) {
  auto pos = base.find("\"" + key + "\"");
  EXPECT_NE(pos, std::string::npos);
  auto end = base.find('\n', pos);
  const bool comma = base[end - 1] == ',';
  return base.substr(0, pos) + "\"" + key + "\": " + value + (comma ? "," : "") + base.substr(end);
}

// Drops the line holding `key`, which must be the last one.
std::string without(const std::string& base, const std::string& key) {
  auto pos = base.find("\"" + key + "\"");
  auto prev = base.rfind(',', pos);
  return base.substr(0, prev) + "\n}";
}

std::vector<std::string> violations_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

class SpyInductive final : public InductiveLearner {
 public:
  explicit SpyInductive(std::vector<std::size_t>* sizes) : sizes_(sizes) {}
  void fit(const std::vector<Point>& xs, const std::vector<Value>& ys) override {
    EXPECT_EQ(xs.size(), ys.size());
    sizes_->push_back(xs.size());
  }
  Value predict(const Point&) const override { return 0; }

 private:
  std::vector<std::size_t>* sizes_;
};

struct SpyLog {
  std::size_t fit = 0;
  std::vector<Point> train;
  std::vector<Point> observed;
  std::vector<Point> queried;
};

class SpyAdaptive final : public SelfAdaptiveLearner {
 public:
  explicit SpyAdaptive(SpyLog* log) : log_(log) {}
  void fit(const std::vector<Point>& xs, const std::vector<Value>&) override {
    log_->fit = xs.size();
    log_->train = xs;
  }
  void observe(const Point& x) override { log_->observed.push_back(x); }
  Value predict(const Point& x) const override {
    log_->queried.push_back(x);
    return 0;
  }

 private:
  SpyLog* log_;
};

}  // namespace

TEST(Config, RoundTripAndDigest) {
  for (const char* text : {kInductive, kSelfAdaptive}) {
    const auto cfg = parse_config(text);
    const auto again = parse_config(serialize_config(cfg));
    EXPECT_EQ(cfg, again);
    EXPECT_EQ(serialize_config(cfg), serialize_config(again));
    EXPECT_EQ(config_digest(cfg), config_digest(again));
    EXPECT_EQ(config_digest(cfg).size(), 16u);
  }
  EXPECT_NE(config_digest(parse_config(kInductive)), config_digest(parse_config(kSelfAdaptive)));
}

TEST(Config, DefaultsAreFilledIn) {
  const auto cfg = parse_config(kSelfAdaptive);
  EXPECT_EQ(cfg.learner.schedule.u.shape, IntSchedule::Shape::kPow2);
  EXPECT_EQ(cfg.learner.cls.cap, 64u);
  EXPECT_EQ(cfg.learner.cls.growth, 4u);
  EXPECT_EQ(cfg.window, 0.5);
}

TEST(Config, TrainSizesMustIncrease) {
  const auto v = violations_of(with(kInductive, "train_sizes", "[10, 5]"));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("train_sizes"), std::string::npos);
  EXPECT_FALSE(violations_of(with(kInductive, "train_sizes", "[]")).empty());
  EXPECT_FALSE(violations_of(with(kInductive, "train_sizes", "[0, 4]")).empty());
}

TEST(Config, SeedsAreRequired) {
  const auto v = violations_of(without(kInductive, "seeds"));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("seeds"), std::string::npos);
  const auto text = with(without(kInductive, "seeds"), "process",
                         R"({"kind": "iid", "params": {"space": "natural", "k": 5}, "seed": 9})");
  EXPECT_EQ(parse_config(text).seeds, std::vector<std::uint64_t>{9});
}

TEST(Config, UnknownKeysNameTheirPath) {
  const auto v = violations_of(with(kInductive, "learner", R"({"rule": "memorize", "fallbak": 0})"));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("learner.fallbak"), std::string::npos);
}

TEST(Config, CollectsEveryViolation) {
  auto text = with(kInductive, "train_sizes", "[10, 5]");
  text = with(text, "eval_horizon", "0");
  text = with(text, "seeds", "[1], \"window\": 2");
  EXPECT_EQ(violations_of(text).size(), 3u);
  // Malformed values are reported together; range checks wait until they parse.
  text = with(kInductive, "loss", R"({"values": "binary", "kind": "hinge"})");
  text = with(text, "learner", R"({"rule": "memorize", "fallbak": 0})");
  EXPECT_EQ(violations_of(text).size(), 2u);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/cfg.json"), IoError);
}

TEST(Config, TargetMustLiveInTheLossSpace) {
  const auto v = violations_of(with(kInductive, "target", R"({"kind": "constant", "value": 3})"));
  ASSERT_FALSE(v.empty());
  EXPECT_NE(v[0].find("target"), std::string::npos);
}

TEST(Config, RaisedCapsWarn) {
  const auto cfg = parse_config(with(kInductive, "seeds", R"([1], "caps": {"experts": 128})"));
  EXPECT_EQ(cfg.caps.experts, 128u);
  EXPECT_FALSE(cfg.warnings.empty());
}

TEST(Harness, RunsAreByteIdenticalAndJobInvariant) {
  for (const char* text : {kInductive, kSelfAdaptive}) {
    const auto cfg = parse_config(text);
    const auto a = trace_csv(run_experiment(cfg, 1));
    const auto b = trace_csv(run_experiment(cfg, 1));
    const auto c = trace_csv(run_experiment(cfg, 3));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
  }
}

TEST(Harness, RowsAreSortedAndComplete) {
  const auto cfg = parse_config(kInductive);
  const auto trace = run_experiment(cfg, 2);
  ASSERT_EQ(trace.records.size(), cfg.seeds.size() * cfg.train_sizes.size());
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    const auto& p = trace.records[i - 1];
    const auto& q = trace.records[i];
    EXPECT_TRUE(p.seed < q.seed || (p.seed == q.seed && p.n < q.n));
  }
  for (const auto& r : trace.records) {
    EXPECT_EQ(r.ms, 0.0);
    EXPECT_GE(r.wmax_loss, 0.0);
    EXPECT_LE(r.avg_loss, 1.0);
  }
  EXPECT_EQ(trace.digest, config_digest(cfg));
  const auto csv = trace_csv(trace);
  EXPECT_EQ(csv.rfind("seed,n,avg_loss,wmax_loss,ms\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), trace.records.size() + 1);
}

TEST(Harness, EmptyTraceIsHeaderOnly) {
  EXPECT_EQ(trace_csv(ExperimentTrace{}), "seed,n,avg_loss,wmax_loss,ms\n");
}

TEST(Harness, MemorizeOnFiniteSupportEventuallyFits) {
  // Five points, n = 100 draws: with overwhelming probability every point is seen.
  const auto trace = run_experiment(parse_config(kInductive), 1);
  for (const auto& r : trace.records) {
    if (r.n == 100) EXPECT_EQ(r.avg_loss, 0.0) << r.seed;
  }
}

TEST(Harness, OnlineMemorizeOnLogGrowth) {
  const auto cfg = parse_config(R"({
    "protocol": "online",
    "process": {"kind": "log_growth", "params": {"space": "natural"}},
    "target": {"kind": "constant", "value": 1},
    "loss": {"values": "binary", "kind": "zero_one"},
    "learner": {"fallback": 0},
    "online": {"rule": "memorize"},
    "train_sizes": [1, 3, 7, 1048575],
    "seeds": [1]
  })");
  const auto trace = run_experiment(cfg, 1);
  ASSERT_EQ(trace.records.size(), 4u);
  EXPECT_EQ(trace.records[0].avg_loss, 1.0);
  EXPECT_EQ(trace.records[1].avg_loss, 2.0 / 3.0);
  EXPECT_EQ(trace.records[2].avg_loss, 3.0 / 7.0);
  EXPECT_EQ(trace.records[3].avg_loss, 20.0 / 1048575.0);
}

TEST(Harness, SpyInductiveSeesTrainSizes) {
  const auto cfg = parse_config(kInductive);
  std::vector<std::size_t> sizes;
  LearnerOverrides hooks;
  hooks.inductive = [&] { return std::make_unique<SpyInductive>(&sizes); };
  run_experiment(cfg, 1, hooks);
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 10, 100, 1, 10, 100, 1, 10, 100}));
}

TEST(Harness, SpySelfAdaptiveSeesOnlyUnlabeledPointsInOrder) {
  auto cfg = parse_config(kSelfAdaptive);
  cfg.train_sizes = {16};
  cfg.seeds = {7};
  SpyLog log;
  LearnerOverrides hooks;
  hooks.self_adaptive = [&] { return std::make_unique<SpyAdaptive>(&log); };
  run_experiment(cfg, 1, hooks);
  EXPECT_EQ(log.fit, 16u);
  auto stream = build_process(cfg, 7);
  const auto xs = stream.take(16 + cfg.eval_horizon + 1);
  EXPECT_EQ(log.train, std::vector<Point>(xs.begin(), xs.begin() + 16));
  ASSERT_EQ(log.queried.size(), cfg.eval_horizon + 1);
  ASSERT_EQ(log.observed.size(), cfg.eval_horizon);
  for (std::size_t j = 0; j < log.observed.size(); ++j) {
    EXPECT_EQ(log.queried[j], xs[16 + j]);
    EXPECT_EQ(log.observed[j], xs[16 + j]);
  }
}

TEST(Harness, HorizonCapIsCheckedFirst) {
  auto cfg = parse_config(kInductive);
  cfg.caps.max_steps = 150;
  EXPECT_THROW(run_experiment(cfg, 1), ResourceError);
  EXPECT_EQ(required_horizon(parse_config(kInductive)), 300u);
}

TEST(Harness, WriteTraceReportsThePath) {
  const auto trace = run_experiment(parse_config(kInductive), 1);
  try {
    write_trace(trace, "/proc/ulab-cannot-write/here");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/proc/ulab-cannot-write"), std::string::npos);
  }
  const auto dir = std::filesystem::temp_directory_path() / "ulab_harness_test";
  std::filesystem::remove_all(dir);
  write_trace(trace, dir.string());
  std::ifstream csv(dir / "trace.csv");
  std::stringstream body;
  body << csv.rdbuf();
  EXPECT_EQ(body.str(), trace_csv(trace));
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.json"));
  std::filesystem::remove_all(dir);
}

TEST(WindowedMax, Examples) {
  EXPECT_EQ(windowed_max({1, 0, 0, 0}, 0.5), 1.0 / 3.0);
  EXPECT_EQ(windowed_max({1, 0, 0, 0}, 1.0), 1.0);
  EXPECT_EQ(windowed_max({0, 0, 1, 1}, 0.25), 0.5);
  EXPECT_EQ(windowed_max({0, 0, 0, 1}, 0.01), 0.25);
}

TEST(Suite, IdsAreListedOnce) {
  const auto ids = criterion_ids();
  ASSERT_EQ(ids.size(), 10u);
  std::set<int> unique(ids.begin(), ids.end());
  EXPECT_EQ(unique.size(), 10u);
  for (int i = 1; i <= 10; ++i) EXPECT_TRUE(unique.count(i));
  EXPECT_THROW(run_suite("C11"), UsageError);
}

TEST(Suite, FilterAcceptsSeveralSpellings) {
  for (const char* f : {"C5", "c5", "5"}) {
    const auto results = run_suite(f);
    ASSERT_EQ(results.size(), 1u);
    EXPECT_EQ(results[0].id, 5);
    EXPECT_EQ(format_result(results[0]).rfind(results[0].passed ? "PASS C5" : "FAIL C5", 0), 0u);
  }
}
