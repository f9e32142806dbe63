#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ulab/point.hpp"

namespace ulab {

enum class ProcessKind : std::uint8_t {
  kIid,
  kMarkov,
  kConstant,
  kNnKiller,
  kDoublingBlock,
  kLogGrowth,
  kBernoulliBlock,
  kFreshPoint,
};

std::string to_string(ProcessKind kind);
ProcessKind parse_process_kind(const std::string& text);
std::vector<ProcessKind> all_process_kinds();

// Parameters shared by the process kinds; each kind reads the subset listed by
// process_param_names().
struct ProcessParams {
  SpaceKind space = SpaceKind::kUnit;
  std::uint64_t k = 10;  // support size for iid/markov on the naturals
  double stay = 0.9;     // markov self-transition probability
  double x0 = 0.25;      // constant point / doubling-block x_0
  double x1 = 0.75;      // doubling-block x_1

  friend bool operator==(const ProcessParams&, const ProcessParams&) = default;
};

// Parameter keys a kind accepts (besides "space").
std::vector<std::string> process_param_names(ProcessKind kind);
// Default space for a kind when none is configured.
SpaceKind default_space(ProcessKind kind);
void validate_params(ProcessKind kind, const ProcessParams& params);

enum class Tri : std::uint8_t { kHolds, kFails, kUnknown };
std::string to_string(Tri t);

struct Claim {
  Tri status = Tri::kUnknown;
  std::string reason;
};

// Documented membership in C1, C2, C3 and CRF. Never inferred at runtime.
struct ProcessClaims {
  Claim c1;
  Claim c2;
  Claim c3;
  Claim crf;
};

ProcessClaims claims_for(ProcessKind kind, const ProcessParams& params);

// The i-th of a fixed sequence of distinct points: i itself on the naturals,
// the base-2 radical inverse of i on [0,1].
Point distinct_point(SpaceKind space, std::uint64_t i);

// Seeded, replayable point generator. Copying a stream clones it at its cursor.
class ProcessStream {
 public:
  ProcessStream(ProcessKind kind, ProcessParams params, std::uint64_t seed);

  ProcessKind kind() const { return kind_; }
  const ProcessParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  SpaceKind space() const { return params_.space; }
  // Number of points emitted so far.
  std::uint64_t cursor() const { return t_; }
  const ProcessClaims& claims() const { return claims_; }

  // Returns X_{t+1} and advances.
  Point next();
  std::vector<Point> take(std::size_t count);
  void reset();

 private:
  Point point_at(std::uint64_t t);

  ProcessKind kind_;
  ProcessParams params_;
  std::uint64_t seed_;
  std::uint64_t t_ = 0;
  std::uint64_t markov_state_ = 0;
  ProcessClaims claims_;
};

ProcessStream make_process(ProcessKind kind, const ProcessParams& params, std::uint64_t seed);
ProcessStream make_process(const std::string& kind, const ProcessParams& params, std::uint64_t seed);
inline Point stream_next(ProcessStream& s) { return s.next(); }

// Block boundaries of the nearest-neighbour counterexample: n_1 = 1,
// n_k = n_{k-1} + k n_{k-1}^2. Supported for k <= 5.
std::uint64_t nn_killer_boundary(int k);
constexpr std::uint64_t kNnKillerHorizon = 65888130;  // n_5
// Whether t indexes one of the deterministic grid positions (including t = 1).
bool nn_killer_is_grid_time(std::uint64_t t);
// Whether x is one of the grid points the generator can emit, k <= 5.
bool nn_killer_in_grid(double x);

}  // namespace ulab
