#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ulab/loss.hpp"
#include "ulab/simple_function.hpp"

namespace ulab {

enum class ValueGridKind : std::uint8_t {
  kMidpoint,   // unit values 1/2, 1/4, 3/4, 1/8, ...
  kEndpoints,  // unit values 0, 1, then the midpoint order
};

std::string to_string(ValueGridKind kind);
ValueGridKind parse_value_grid(const std::string& text);

// First i elements of the fixed dense enumeration of a value space. Finite
// value spaces are exhausted after all their labels.
std::vector<Value> dense_grid(const LossSpace& space, std::uint64_t i, ValueGridKind grid = ValueGridKind::kMidpoint);

// Describes the nested classes F_1 ⊆ F_2 ⊆ ...: F_i is the first N(i) members
// of one fixed enumeration of dyadic (or initial-segment) simple functions.
struct ClassSchedule {
  SpaceKind space = SpaceKind::kUnit;
  LossSpace values;
  ValueGridKind grid = ValueGridKind::kMidpoint;
  std::uint64_t growth = 4;  // N(i) = growth * i
  std::uint64_t cap = 4096;

  // N(i), saturating at the cap.
  std::uint64_t size(std::uint64_t i) const;
  // Smallest i with N(i) >= count, or 0 when the cap makes it unreachable.
  std::uint64_t first_stage_with(std::uint64_t count) const;
  void validate() const;

  friend bool operator==(const ClassSchedule&, const ClassSchedule&) = default;
};

// The enumeration itself, materialized up to the cap.
//
// Members are listed in diagonal blocks (L, G) ordered by L + G, then L. Block
// (L, G) holds every function whose minimal description uses level-L cells and
// exactly the first G grid values: on [0,1] the 2^L dyadic cells of width
// 2^-L; on the naturals the cells {0}, ..., {L-1} and the remainder {L, L+1, ...}.
class FunctionClass {
 public:
  explicit FunctionClass(ClassSchedule schedule);

  const ClassSchedule& schedule() const { return schedule_; }
  const LossSpace& loss_space() const { return schedule_.values; }

  // Number of materialized members (the cap).
  std::size_t total() const { return levels_.size(); }
  // |F_i|.
  std::size_t size(std::uint64_t i) const { return static_cast<std::size_t>(schedule_.size(i)); }

  std::uint32_t level(std::size_t idx) const { return levels_.at(idx); }
  const std::vector<Value>& cell_values(std::size_t idx) const { return values_.at(idx); }

  Value eval(std::size_t idx, const Point& x) const;
  Value eval_unit(std::size_t idx, double x) const {
    const std::uint32_t l = levels_[idx];
    const std::uint64_t cells = std::uint64_t{1} << l;
    auto c = static_cast<std::uint64_t>(x * static_cast<double>(cells));
    if (c >= cells) c = cells - 1;
    return values_[idx][c];
  }
  Value eval_nat(std::size_t idx, std::uint64_t x) const {
    const std::uint32_t l = levels_[idx];
    return values_[idx][x < l ? x : l];
  }

  SimpleFunction to_simple_function(std::size_t idx) const;
  // The first `count` members; ResourceError past the cap.
  std::vector<SimpleFunction> prefix(std::size_t count) const;
  // F_i as simple functions.
  std::vector<SimpleFunction> enumerate(std::uint64_t i) const;

  // Exact sup over X of loss(f_a(x), f_b(x)), computed on the finer grid.
  double sup_distance(std::size_t a, std::size_t b) const;

 private:
  void build();

  ClassSchedule schedule_;
  std::vector<std::uint32_t> levels_;
  std::vector<std::vector<Value>> values_;
};

std::vector<SimpleFunction> enumerate_class(const ClassSchedule& schedule, std::uint64_t i);

// Exact sup over X of loss(f(x), g(x)); attained on a cell of the common
// refinement since both functions are constant there.
double sup_loss_distance(const SimpleFunction& f, const SimpleFunction& g, const LossSpace& space);

}  // namespace ulab
