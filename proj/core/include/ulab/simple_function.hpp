#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ulab/loss.hpp"
#include "ulab/measurable_set.hpp"

namespace ulab {

using Partition = std::vector<MeasurableSet>;

// A function taking finitely many values, each on a measurable cell. Cells
// must be pairwise disjoint; points outside every cell map to the default.
class SimpleFunction {
 public:
  SimpleFunction(std::vector<MeasurableSet> cells, std::vector<Value> values, Value default_value);

  static SimpleFunction constant(SpaceKind space, Value value);

  Value operator()(const Point& x) const;

  SpaceKind space() const { return space_; }
  const std::vector<MeasurableSet>& cells() const { return cells_; }
  const std::vector<Value>& values() const { return values_; }
  Value default_value() const { return default_; }

  // Cells plus the (nonempty) uncovered remainder, so the result covers the
  // whole instance space; values() of the remainder is the default.
  Partition partition() const;
  std::vector<Value> partition_values() const;

  friend bool operator==(const SimpleFunction& a, const SimpleFunction& b) {
    return a.cells_ == b.cells_ && a.values_ == b.values_ && a.default_ == b.default_;
  }

 private:
  struct Piece {
    Rational lo;
    Rational hi;
    std::uint32_t cell;
  };

  void build_index();
  std::optional<std::size_t> locate(const Point& x) const;

  SpaceKind space_ = SpaceKind::kUnit;
  std::vector<MeasurableSet> cells_;
  std::vector<Value> values_;
  Value default_ = 0.0;

  std::vector<Piece> pieces_;                                    // unit space
  std::vector<std::pair<std::uint64_t, std::uint32_t>> members_;  // natural space
  std::optional<std::uint32_t> cofinite_cell_;
};

inline Value simple_eval(const SimpleFunction& f, const Point& x) { return f(x); }

// Cell of a common refinement together with the indices of the input cells
// it came from.
struct RefinedCell {
  MeasurableSet set;
  std::size_t first;
  std::size_t second;
};

// Nonempty pairwise intersections of two partitions of the same space, listed
// in cell_less order. Throws UsageError if either input fails to cover X or has
// overlapping cells.
std::vector<RefinedCell> refine_with_sources(const Partition& p1, const Partition& p2);
Partition partition_refine(const Partition& p1, const Partition& p2);

// True when the cells are pairwise disjoint and cover the instance space.
bool is_partition(const Partition& p, SpaceKind space);

}  // namespace ulab
