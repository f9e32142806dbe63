#include "ulab/process.hpp"

#include <bit>
#include <cmath>

#include "ulab/error.hpp"
#include "ulab/rng.hpp"

namespace ulab {
namespace {

// Independent random lanes per kind so draws never alias.
constexpr std::uint64_t kLaneIid = 0;
constexpr std::uint64_t kLaneW = 1;
constexpr std::uint64_t kLaneStay = 2;
constexpr std::uint64_t kLaneJump = 3;
constexpr std::uint64_t kLaneBlock = 4;

struct KindName {
  ProcessKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {ProcessKind::kIid, "iid"},
    {ProcessKind::kMarkov, "markov"},
    {ProcessKind::kConstant, "constant"},
    {ProcessKind::kNnKiller, "nn_killer"},
    {ProcessKind::kDoublingBlock, "doubling_block"},
    {ProcessKind::kLogGrowth, "log_growth"},
    {ProcessKind::kBernoulliBlock, "bernoulli_block"},
    {ProcessKind::kFreshPoint, "fresh_point"},
};

const std::uint64_t kBoundaries[] = {0, 1, 3, 30, 3630, 65888130};

double nn_grid_value(int k, std::uint64_t offset) {
  const double b = (k % 2 == 0) ? 1.0 : 0.0;
  const double nsq = static_cast<double>(kBoundaries[k - 1] * kBoundaries[k - 1]);
  return b / 2.0 + static_cast<double>(offset) / (2.0 * nsq);
}

Point make_point(SpaceKind space, double v) {
  if (space == SpaceKind::kUnit) return Point::unit(v);
  return Point::natural(static_cast<std::uint64_t>(v));
}

bool valid_coordinate(SpaceKind space, double v) {
  if (space == SpaceKind::kUnit) return v >= 0.0 && v <= 1.0;
  return v >= 0.0 && v == std::floor(v) && v < 0x1.0p63;
}

Claim holds(std::string r) { return Claim{Tri::kHolds, std::move(r)}; }
Claim fails(std::string r) { return Claim{Tri::kFails, std::move(r)}; }
Claim unknown(std::string r) { return Claim{Tri::kUnknown, std::move(r)}; }

}  // namespace

std::string to_string(ProcessKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "?";
}

ProcessKind parse_process_kind(const std::string& text) {
  for (const auto& kn : kKindNames) {
    if (text == kn.name) return kn.kind;
  }
  throw ConfigError("process.kind: unknown process '" + text + "'");
}

std::vector<ProcessKind> all_process_kinds() {
  std::vector<ProcessKind> out;
  for (const auto& kn : kKindNames) out.push_back(kn.kind);
  return out;
}

std::vector<std::string> process_param_names(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::kIid: return {"k"};
    case ProcessKind::kMarkov: return {"k", "stay"};
    case ProcessKind::kConstant: return {"x0"};
    case ProcessKind::kDoublingBlock: return {"x0", "x1"};
    default: return {};
  }
}

SpaceKind default_space(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::kMarkov:
    case ProcessKind::kLogGrowth:
    case ProcessKind::kBernoulliBlock:
    case ProcessKind::kFreshPoint:
      return SpaceKind::kNatural;
    default:
      return SpaceKind::kUnit;
  }
}

void validate_params(ProcessKind kind, const ProcessParams& p) {
  std::vector<std::string> problems;
  const std::string prefix = "process.params.";
  switch (kind) {
    case ProcessKind::kIid:
      if (p.space == SpaceKind::kNatural && (p.k == 0 || p.k > (std::uint64_t{1} << 32))) {
        problems.push_back(prefix + "k: must lie in [1, 2^32]");
      }
      break;
    case ProcessKind::kMarkov:
      if (p.space != SpaceKind::kNatural) problems.push_back(prefix + "space: markov chains live on the naturals");
      if (p.k == 0 || p.k > (std::uint64_t{1} << 32)) problems.push_back(prefix + "k: must lie in [1, 2^32]");
      if (!(p.stay >= 0.0 && p.stay <= 1.0)) problems.push_back(prefix + "stay: must lie in [0,1]");
      break;
    case ProcessKind::kConstant:
      if (!valid_coordinate(p.space, p.x0)) problems.push_back(prefix + "x0: not a point of " + to_string(p.space));
      break;
    case ProcessKind::kDoublingBlock:
      if (!valid_coordinate(p.space, p.x0)) problems.push_back(prefix + "x0: not a point of " + to_string(p.space));
      if (!valid_coordinate(p.space, p.x1)) problems.push_back(prefix + "x1: not a point of " + to_string(p.space));
      if (p.x0 == p.x1) problems.push_back(prefix + "x1: must differ from x0");
      break;
    case ProcessKind::kNnKiller:
      if (p.space != SpaceKind::kUnit) problems.push_back(prefix + "space: nn_killer lives on [0,1]");
      break;
    default:
      break;
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::kHolds: return "holds";
    case Tri::kFails: return "fails";
    case Tri::kUnknown: return "unknown";
  }
  return "?";
}

ProcessClaims claims_for(ProcessKind kind, const ProcessParams& p) {
  const bool finite_support = p.space == SpaceKind::kNatural;
  switch (kind) {
    case ProcessKind::kIid:
      return {holds("i.i.d. processes have convergent relative frequencies"),
              holds("contained in condition 1"),
              finite_support ? holds("finitely many distinct points")
                             : fails("continuous marginal visits [0,2^-k) for every k"),
              holds("strong law of large numbers")};
    case ProcessKind::kMarkov:
      return {holds("finite support"), holds("finite support"), holds("finite support"),
              holds("ergodic theorem for finite-state chains")};
    case ProcessKind::kConstant:
      return {holds("single point"), holds("single point"), holds("single point"), holds("single point")};
    case ProcessKind::kNnKiller:
      return {holds("deterministic grid times have vanishing density; the rest is uniform within a half"),
              holds("contained in condition 1"),
              fails("uniform draws visit (0,2^-k) for every k"),
              fails("the dense half alternates between blocks")};
    case ProcessKind::kDoublingBlock:
      return {holds("two points"), holds("two points"), holds("two points"),
              fails("frequency of x_1 oscillates between 1/3 and 2/3 at block ends")};
    case ProcessKind::kLogGrowth:
      return {fails("each new point carries at least half of the next block's mass"),
              holds("distinct points up to T grow like log T"),
              fails("every tail {z_k, z_k+1, ...} is visited"),
              fails("block frequencies of odd-indexed points oscillate")};
    case ProcessKind::kBernoulliBlock:
      return {fails("condition 1 implies condition 2, which fails here"),
              fails("infinitely many fresh blocks occur almost surely"),
              fails("infinitely many fresh blocks occur almost surely"),
              unknown("not analysed")};
    case ProcessKind::kFreshPoint:
      return {fails("every point is new"), fails("every point is new"), fails("every point is new"),
              fails("countable sets of new points with oscillating density")};
  }
  return {};
}

Point distinct_point(SpaceKind space, std::uint64_t i) {
  if (space == SpaceKind::kNatural) return Point::natural(i);
  std::uint64_t r = i;
  r = ((r >> 1) & 0x5555555555555555ULL) | ((r & 0x5555555555555555ULL) << 1);
  r = ((r >> 2) & 0x3333333333333333ULL) | ((r & 0x3333333333333333ULL) << 2);
  r = ((r >> 4) & 0x0F0F0F0F0F0F0F0FULL) | ((r & 0x0F0F0F0F0F0F0F0FULL) << 4);
  r = ((r >> 8) & 0x00FF00FF00FF00FFULL) | ((r & 0x00FF00FF00FF00FFULL) << 8);
  r = ((r >> 16) & 0x0000FFFF0000FFFFULL) | ((r & 0x0000FFFF0000FFFFULL) << 16);
  r = (r >> 32) | (r << 32);
  return Point::unit(static_cast<double>(r >> 11) * 0x1.0p-53);
}

std::uint64_t nn_killer_boundary(int k) {
  if (k < 1 || k > 5) throw ResourceError("nn_killer: boundary n_" + std::to_string(k) + " is beyond the horizon cap");
  return kBoundaries[k];
}

bool nn_killer_is_grid_time(std::uint64_t t) {
  if (t == 1) return true;
  for (int k = 2; k <= 5; ++k) {
    if (t <= kBoundaries[k]) return (t - kBoundaries[k - 1] - 1) % static_cast<std::uint64_t>(k) == 0;
  }
  throw ResourceError("nn_killer: t = " + std::to_string(t) + " exceeds the horizon n_5");
}

bool nn_killer_in_grid(double x) {
  for (int k = 2; k <= 5; ++k) {
    const std::uint64_t nsq = kBoundaries[k - 1] * kBoundaries[k - 1];
    const double b = (k % 2 == 0) ? 1.0 : 0.0;
    const double approx = (x - b / 2.0) * 2.0 * static_cast<double>(nsq);
    if (approx < -1.0 || approx > static_cast<double>(nsq)) continue;
    const auto centre = static_cast<std::int64_t>(std::llround(approx));
    for (std::int64_t c = centre - 1; c <= centre + 1; ++c) {
      if (c < 0 || static_cast<std::uint64_t>(c) >= nsq) continue;
      if (nn_grid_value(k, static_cast<std::uint64_t>(c)) == x) return true;
    }
  }
  return false;
}

ProcessStream::ProcessStream(ProcessKind kind, ProcessParams params, std::uint64_t seed)
    : kind_(kind), params_(params), seed_(seed) {
  validate_params(kind_, params_);
  claims_ = claims_for(kind_, params_);
}

void ProcessStream::reset() {
  t_ = 0;
  markov_state_ = 0;
}

Point ProcessStream::next() { return point_at(++t_); }

std::vector<Point> ProcessStream::take(std::size_t count) {
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(next());
  return out;
}

Point ProcessStream::point_at(std::uint64_t t) {
  const SpaceKind space = params_.space;
  switch (kind_) {
    case ProcessKind::kIid: {
      const std::uint64_t h = counter_hash(seed_, kLaneIid, t);
      if (space == SpaceKind::kUnit) return Point::unit(unit_from_bits(h));
      return Point::natural(below_from_bits(h, params_.k));
    }
    case ProcessKind::kMarkov: {
      if (t == 1 || unit_from_bits(counter_hash(seed_, kLaneStay, t)) >= params_.stay) {
        markov_state_ = below_from_bits(counter_hash(seed_, kLaneJump, t), params_.k);
      }
      return Point::natural(markov_state_);
    }
    case ProcessKind::kConstant:
      return make_point(space, params_.x0);
    case ProcessKind::kNnKiller: {
      if (t == 1) return Point::unit(0.0);
      for (int k = 2; k <= 5; ++k) {
        if (t > kBoundaries[k]) continue;
        const std::uint64_t r = t - kBoundaries[k - 1] - 1;
        const std::uint64_t kk = static_cast<std::uint64_t>(k);
        if (r % kk == 0) return Point::unit(nn_grid_value(k, r / kk));
        const double a = (k % 2 == 1) ? 0.5 : 0.0;
        return Point::unit(a + open_half_from_bits(counter_hash(seed_, kLaneW, t)));
      }
      throw ResourceError("nn_killer: t = " + std::to_string(t) + " exceeds the horizon n_5 = " +
                          std::to_string(kNnKillerHorizon));
    }
    case ProcessKind::kDoublingBlock: {
      // X_t = x_{i mod 2} for 3^{i-1} <= t <= 3^i - 1.
      std::uint64_t i = 1;
      std::uint64_t pow = 3;
      while (t >= pow) {
        pow *= 3;
        ++i;
      }
      return make_point(space, i % 2 == 1 ? params_.x1 : params_.x0);
    }
    case ProcessKind::kLogGrowth:
      return distinct_point(space, static_cast<std::uint64_t>(std::bit_width(t)));
    case ProcessKind::kBernoulliBlock: {
      const auto k = static_cast<std::uint64_t>(std::bit_width(t));
      const bool fresh = unit_from_bits(counter_hash(seed_, kLaneBlock, k)) * static_cast<double>(k) < 1.0;
      return distinct_point(space, fresh ? t : 0);
    }
    case ProcessKind::kFreshPoint:
      return distinct_point(space, t);
  }
  throw UsageError("process: unknown kind");
}

ProcessStream make_process(ProcessKind kind, const ProcessParams& params, std::uint64_t seed) {
  return ProcessStream(kind, params, seed);
}

ProcessStream make_process(const std::string& kind, const ProcessParams& params, std::uint64_t seed) {
  return ProcessStream(parse_process_kind(kind), params, seed);
}

}  // namespace ulab
