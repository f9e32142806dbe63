#include <cmath>
#include <limits>

#include "ulab/error.hpp"
#include "ulab/learners.hpp"

namespace ulab {
namespace {

constexpr std::uint64_t kHuge = std::uint64_t{1} << 62;

std::uint64_t ceil_to_count(double v) {
  if (!(v < static_cast<double>(kHuge))) return kHuge;
  const double c = std::ceil(v);
  return c < 1.0 ? 1 : static_cast<std::uint64_t>(c);
}

}  // namespace

std::string to_string(IntSchedule::Shape shape) {
  switch (shape) {
    case IntSchedule::Shape::kLinear: return "linear";
    case IntSchedule::Shape::kLog2: return "log2";
    case IntSchedule::Shape::kSqrt: return "sqrt";
    case IntSchedule::Shape::kPow2: return "pow2";
    case IntSchedule::Shape::kConst: return "const";
  }
  return "?";
}

IntSchedule::Shape parse_shape(const std::string& text) {
  if (text == "linear") return IntSchedule::Shape::kLinear;
  if (text == "log2") return IntSchedule::Shape::kLog2;
  if (text == "sqrt") return IntSchedule::Shape::kSqrt;
  if (text == "pow2") return IntSchedule::Shape::kPow2;
  if (text == "const") return IntSchedule::Shape::kConst;
  throw ConfigError("unknown schedule shape '" + text + "' (expected linear|log2|sqrt|pow2|const)");
}

std::uint64_t IntSchedule::operator()(std::uint64_t n) const {
  const double x = static_cast<double>(n);
  std::uint64_t v = 1;
  switch (shape) {
    case Shape::kLinear: v = ceil_to_count(scale * x); break;
    case Shape::kLog2: v = ceil_to_count(scale * std::log2(x + 1.0)); break;
    case Shape::kSqrt: v = ceil_to_count(scale * std::sqrt(x)); break;
    case Shape::kPow2:
      if (n == 0) {
        v = 1;
      } else if (n > 62) {
        v = kHuge;
      } else if (scale == 1.0) {
        v = std::uint64_t{1} << (n - 1);
      } else {
        v = ceil_to_count(std::ldexp(scale, static_cast<int>(n) - 1));
      }
      break;
    case Shape::kConst: v = ceil_to_count(scale); break;
  }
  if (cap != 0 && v > cap) v = cap;
  return v;
}

double GammaSchedule::operator()(std::uint64_t i, double sup_loss) const {
  return scale * sup_loss * std::pow(ratio, static_cast<double>(i - 1));
}

double EpsSchedule::operator()(std::uint64_t n) const {
  if (scale == 0.0) return 0.0;
  return scale / std::pow(static_cast<double>(n), power);
}

void ScheduleParams::validate(const LossSpace& space, bool self_adaptive) const {
  std::vector<std::string> problems;
  const std::string p = "learner.schedule.";
  if (u.shape == IntSchedule::Shape::kConst || u.cap != 0) problems.push_back(p + "u: must grow without bound");
  if (u(1) != 1) problems.push_back(p + "u: u_1 must equal 1, got " + std::to_string(u(1)));
  if (!(u.scale > 0.0)) problems.push_back(p + "u: scale must be positive");
  auto growing = [&](const IntSchedule& s, const char* name) {
    if (s.shape == IntSchedule::Shape::kConst) problems.push_back(p + name + ": must grow without bound");
    if (!(s.scale > 0.0)) problems.push_back(p + name + ": scale must be positive");
  };
  growing(m_hat, "m_hat");
  growing(i_n, "i_n");
  growing(k_n, "k_n");
  if (!(eps.scale >= 0.0)) problems.push_back(p + "eps: scale must be nonnegative");
  if (!(eps.power > 0.0)) problems.push_back(p + "eps: power must be positive");
  if (self_adaptive) {
    if (!space.bounded()) problems.push_back(p + "gamma: the self-adaptive rule needs a bounded loss");
    if (!(gamma.scale >= 1.0)) problems.push_back(p + "gamma: gamma_1 must be at least the sup loss (scale >= 1)");
    if (!(gamma.ratio > 0.0 && gamma.ratio < 1.0)) {
      problems.push_back(p + "gamma: ratio must lie in (0,1) so gamma is nonincreasing and vanishes");
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

std::uint64_t ScheduleParams::max_stage(std::uint64_t n) const {
  if (n == 0) return 0;
  // Exponential probe then bisection; u is nondecreasing.
  std::uint64_t lo = 1;  // u(lo) <= n since u(1) = 1
  std::uint64_t hi = 2;
  while (u(hi) <= n) {
    lo = hi;
    if (hi > (std::uint64_t{1} << 40)) throw ConfigError("learner.schedule.u: does not exceed n = " + std::to_string(n));
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (u(mid) <= n) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace ulab
