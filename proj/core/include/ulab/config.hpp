#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ulab/function_class.hpp"
#include "ulab/learners.hpp"
#include "ulab/online.hpp"
#include "ulab/process.hpp"
#include "ulab/target.hpp"

namespace ulab {

enum class Protocol : std::uint8_t { kInductive, kSelfAdaptive, kOnline };
std::string to_string(Protocol p);
Protocol parse_protocol(const std::string& text);

struct ProcessSpec {
  ProcessKind kind = ProcessKind::kIid;
  ProcessParams params;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const ProcessSpec&, const ProcessSpec&) = default;
};

enum class TargetKind : std::uint8_t { kConstant, kSimple, kKappa, kNnKiller };
std::string to_string(TargetKind kind);

struct TargetSpec {
  TargetKind kind = TargetKind::kConstant;
  Value value = 0.0;                 // constant
  std::vector<std::string> cells;    // simple: set literals
  std::vector<Value> values;         // simple: one per cell
  Value default_value = 0.0;         // simple
  double kappa = 0.0;                // kappa
  std::string partition = "singletons";
  Value y0 = 0.0;                    // kappa / nn_killer
  Value y1 = 1.0;

  friend bool operator==(const TargetSpec&, const TargetSpec&) = default;
};

struct LossSpec {
  ValueKind values = ValueKind::kBinary;
  LossKind kind = LossKind::kZeroOne;
  std::uint32_t labels = 2;

  LossSpace space() const { return LossSpace(values, kind, labels); }
  friend bool operator==(const LossSpec&, const LossSpec&) = default;
};

struct ClassSpec {
  std::uint64_t growth = 4;
  std::uint64_t cap = 4096;
  ValueGridKind value_grid = ValueGridKind::kMidpoint;

  friend bool operator==(const ClassSpec&, const ClassSpec&) = default;
};

struct LearnerSpec {
  RuleKind rule = RuleKind::kSelfAdaptive;
  Value fallback = 0.0;
  ScheduleParams schedule;
  ClassSpec cls;

  friend bool operator==(const LearnerSpec&, const LearnerSpec&) = default;
};

struct OnlineSpec {
  OnlineRuleKind rule = OnlineRuleKind::kMemorize;
  AggregateOptions aggregate;

  friend bool operator==(const OnlineSpec&, const OnlineSpec&) = default;
};

struct Caps {
  std::uint64_t max_steps = 100'000'000;
  std::uint64_t class_size = 4096;
  std::uint64_t experts = 64;

  friend bool operator==(const Caps&, const Caps&) = default;
};

struct ExperimentConfig {
  Protocol protocol = Protocol::kInductive;
  ProcessSpec process;
  TargetSpec target;
  LossSpec loss;
  LearnerSpec learner;
  OnlineSpec online;
  std::vector<std::uint64_t> train_sizes;
  std::uint64_t eval_horizon = 1000;
  double window = 0.5;
  std::vector<std::uint64_t> seeds;
  Caps caps;
  bool timing = false;
  std::string output;
  // Non-fatal notices, e.g. caps raised above their defaults. Not serialized.
  std::vector<std::string> warnings;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.protocol == b.protocol && a.process == b.process && a.target == b.target && a.loss == b.loss &&
           a.learner == b.learner && a.online == b.online && a.train_sizes == b.train_sizes &&
           a.eval_horizon == b.eval_horizon && a.window == b.window && a.seeds == b.seeds && a.caps == b.caps &&
           a.timing == b.timing && a.output == b.output;
  }
};

// Parses and validates a JSON config. Every violation is collected and
// reported in one ConfigError, each prefixed with its key path.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical JSON with sorted keys; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);
// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string config_digest(const ExperimentConfig& cfg);

// Objects the config describes.
TargetFunction build_target(const ExperimentConfig& cfg);
ClassSchedule build_class_schedule(const ExperimentConfig& cfg);
ProcessStream build_process(const ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace ulab
