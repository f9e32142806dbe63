#include "ulab/function_class.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ulab/error.hpp"

namespace ulab {
namespace {

constexpr std::uint32_t kMaxUnitLevel = 30;

// Values of a level-L function are collapsible when the same function is
// already describable at level L-1.
bool collapsible(SpaceKind space, std::uint32_t level, const std::vector<std::uint32_t>& digits) {
  if (level == 0) return false;
  if (space == SpaceKind::kUnit) {
    for (std::size_t j = 0; j + 1 < digits.size(); j += 2) {
      if (digits[j] != digits[j + 1]) return false;
    }
    return true;
  }
  return digits[level - 1] == digits[level];
}

// Mixed-radix increment, last digit least significant; false on wrap-around.
bool advance(std::vector<std::uint32_t>& digits, std::uint32_t radix) {
  for (std::size_t pos = digits.size(); pos-- > 0;) {
    if (++digits[pos] < radix) return true;
    digits[pos] = 0;
  }
  return false;
}

}  // namespace

std::string to_string(ValueGridKind kind) {
  return kind == ValueGridKind::kMidpoint ? "midpoint" : "endpoints";
}

ValueGridKind parse_value_grid(const std::string& text) {
  if (text == "midpoint") return ValueGridKind::kMidpoint;
  if (text == "endpoints") return ValueGridKind::kEndpoints;
  throw ConfigError("class.value_grid: unknown grid '" + text + "' (expected midpoint|endpoints)");
}

std::vector<Value> dense_grid(const LossSpace& space, std::uint64_t i, ValueGridKind grid) {
  if (i == 0) throw UsageError("dense_grid: i must be positive");
  std::vector<Value> out;
  if (space.finite_values()) {
    auto all = space.finite_value_list();
    if (all.size() > i) all.resize(i);
    return all;
  }
  if (space.values() == ValueKind::kNatural) {
    for (std::uint64_t k = 0; k < i; ++k) out.push_back(static_cast<Value>(k));
    return out;
  }
  if (grid == ValueGridKind::kEndpoints) {
    out.push_back(0.0);
    if (out.size() < i) out.push_back(1.0);
  }
  for (int level = 1; out.size() < i; ++level) {
    if (level > 52) throw ResourceError("dense_grid: grid exhausted double precision");
    const double denom = std::ldexp(1.0, level);
    const std::uint64_t count = std::uint64_t{1} << (level - 1);
    for (std::uint64_t m = 0; m < count && out.size() < i; ++m) {
      out.push_back(static_cast<double>(2 * m + 1) / denom);
    }
  }
  return out;
}

std::uint64_t ClassSchedule::size(std::uint64_t i) const {
  if (i == 0) return 0;
  if (i > cap / growth) return cap;
  return std::min(cap, growth * i);
}

std::uint64_t ClassSchedule::first_stage_with(std::uint64_t count) const {
  if (count > cap) return 0;
  if (count == 0) return 1;
  return (count + growth - 1) / growth;
}

void ClassSchedule::validate() const {
  std::vector<std::string> problems;
  if (growth == 0) problems.push_back("class.growth: must be positive");
  if (cap == 0) problems.push_back("class.cap: must be positive");
  if (values.finite_values() && values.finite_value_list().size() < 2) {
    problems.push_back("class.values: need at least two labels");
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

FunctionClass::FunctionClass(ClassSchedule schedule) : schedule_(std::move(schedule)) {
  schedule_.validate();
  build();
}

void FunctionClass::build() {
  const std::size_t cap = static_cast<std::size_t>(schedule_.cap);
  const std::uint64_t grid_limit = schedule_.values.finite_values()
                                       ? schedule_.values.finite_value_list().size()
                                       : std::numeric_limits<std::uint64_t>::max();
  levels_.reserve(cap);
  values_.reserve(cap);
  std::vector<Value> grid;
  for (std::uint64_t d = 1; levels_.size() < cap; ++d) {
    for (std::uint64_t level = 0; level < d && levels_.size() < cap; ++level) {
      const std::uint64_t g = d - level;
      if (g > grid_limit) continue;
      if (g == 1 && level > 0) continue;  // constant functions only live at level 0
      if (schedule_.space == SpaceKind::kUnit && level > kMaxUnitLevel) {
        throw ResourceError("function class: dyadic level exceeds " + std::to_string(kMaxUnitLevel));
      }
      if (grid.size() < g) grid = dense_grid(schedule_.values, g, schedule_.grid);
      const std::size_t cells = schedule_.space == SpaceKind::kUnit ? (std::size_t{1} << level) : level + 1;
      std::vector<std::uint32_t> digits(cells, 0);
      while (levels_.size() < cap) {
        const bool uses_top = std::find(digits.begin(), digits.end(), g - 1) != digits.end();
        if (uses_top && !collapsible(schedule_.space, static_cast<std::uint32_t>(level), digits)) {
          std::vector<Value> vals(cells);
          for (std::size_t c = 0; c < cells; ++c) vals[c] = grid[digits[c]];
          levels_.push_back(static_cast<std::uint32_t>(level));
          values_.push_back(std::move(vals));
        }
        if (!advance(digits, static_cast<std::uint32_t>(g))) break;
      }
    }
  }
}

Value FunctionClass::eval(std::size_t idx, const Point& x) const {
  if (x.space() != schedule_.space) throw UsageError("function class: point " + x.to_string() + " in wrong space");
  return x.is_unit() ? eval_unit(idx, x.real()) : eval_nat(idx, x.nat());
}

SimpleFunction FunctionClass::to_simple_function(std::size_t idx) const {
  const std::uint32_t l = levels_.at(idx);
  const auto& vals = values_[idx];
  std::vector<MeasurableSet> cells;
  if (schedule_.space == SpaceKind::kUnit) {
    const std::int64_t denom = std::int64_t{1} << l;
    for (std::int64_t c = 0; c < denom; ++c) {
      cells.push_back(MeasurableSet::interval(Rational(c, denom), Rational(c + 1, denom)));
    }
  } else {
    std::vector<std::uint64_t> head;
    for (std::uint64_t c = 0; c < l; ++c) {
      cells.push_back(MeasurableSet::finite({c}));
      head.push_back(c);
    }
    cells.push_back(MeasurableSet::cofinite(std::move(head)));
  }
  return SimpleFunction(std::move(cells), vals, vals.back());
}

std::vector<SimpleFunction> FunctionClass::prefix(std::size_t count) const {
  if (count > total()) {
    throw ResourceError("function class: requested " + std::to_string(count) + " members but the cap is " +
                        std::to_string(total()));
  }
  std::vector<SimpleFunction> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(to_simple_function(k));
  return out;
}

std::vector<SimpleFunction> FunctionClass::enumerate(std::uint64_t i) const {
  if (i == 0) throw UsageError("enumerate_class: i must be positive");
  return prefix(size(i));
}

double FunctionClass::sup_distance(std::size_t a, std::size_t b) const {
  const std::uint32_t la = levels_.at(a);
  const std::uint32_t lb = levels_.at(b);
  const std::uint32_t top = std::max(la, lb);
  const auto& loss = schedule_.values;
  double worst = 0.0;
  if (schedule_.space == SpaceKind::kUnit) {
    const std::uint64_t cells = std::uint64_t{1} << top;
    for (std::uint64_t c = 0; c < cells; ++c) {
      worst = std::max(worst, loss.loss_unchecked(values_[a][c >> (top - la)], values_[b][c >> (top - lb)]));
    }
  } else {
    for (std::uint64_t x = 0; x <= top; ++x) {
      worst = std::max(worst, loss.loss_unchecked(eval_nat(a, x), eval_nat(b, x)));
    }
  }
  return worst;
}

std::vector<SimpleFunction> enumerate_class(const ClassSchedule& schedule, std::uint64_t i) {
  return FunctionClass(schedule).enumerate(i);
}

double sup_loss_distance(const SimpleFunction& f, const SimpleFunction& g, const LossSpace& space) {
  if (f.space() != g.space()) throw UsageError("sup_loss_distance: functions over different instance spaces");
  const auto vf = f.partition_values();
  const auto vg = g.partition_values();
  double worst = 0.0;
  for (const auto& cell : refine_with_sources(f.partition(), g.partition())) {
    worst = std::max(worst, space.loss(vf[cell.first], vg[cell.second]));
  }
  return worst;
}

}  // namespace ulab
