#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <iosfwd>
#include <string>
#include <vector>

#include "ulab/config.hpp"

namespace ulab {

struct TraceRecord {
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  double avg_loss = 0.0;
  // Largest prefix average whose length falls in the final window fraction.
  double wmax_loss = 0.0;
  double ms = 0.0;  // 0 unless timing was requested
};

struct ExperimentTrace {
  std::vector<TraceRecord> records;  // sorted by (seed, n)
  std::string digest;
  std::string version;
  std::string protocol;
  std::vector<std::string> warnings;
};

std::string version();

// Largest prefix average (1/t) sum_{s<=t} loss_s over t in [T - ceil(f T) + 1, T].
double windowed_max(const std::vector<double>& losses, double fraction);

// Steps the longest stream of the run will need: max n + M (+1 self-adaptive).
std::uint64_t required_horizon(const ExperimentConfig& cfg);

// Runs every (seed, n) cell. Seeds are spread over `jobs` threads; the result
// does not depend on `jobs`. ResourceError before any work if the horizon
// exceeds caps.max_steps.
ExperimentTrace run_experiment(const ExperimentConfig& cfg, unsigned jobs = 1);

// Replaces the configured learner, e.g. with an instrumented one. Factories are
// called once per (seed, n) cell and may be called from several threads.
struct LearnerOverrides {
  std::function<std::unique_ptr<InductiveLearner>()> inductive;
  std::function<std::unique_ptr<SelfAdaptiveLearner>()> self_adaptive;
};
ExperimentTrace run_experiment(const ExperimentConfig& cfg, unsigned jobs, const LearnerOverrides& overrides);

void write_trace_csv(const ExperimentTrace& trace, std::ostream& out);
std::string trace_csv(const ExperimentTrace& trace);
std::string summary_json(const ExperimentTrace& trace);
// Writes dir/trace.csv and dir/summary.json, creating dir. IoError names the path.
void write_trace(const ExperimentTrace& trace, const std::string& dir);

}  // namespace ulab
