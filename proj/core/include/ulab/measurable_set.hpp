#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ulab/point.hpp"
#include "ulab/rational.hpp"

namespace ulab {

// Half-open interval [lo, hi) with rational endpoints. An interval whose upper
// end is 1 also contains the point 1, so finite unions of these intervals form
// an algebra on the closed unit interval.
struct Interval {
  Rational lo;
  Rational hi;

  friend bool operator==(const Interval&, const Interval&) = default;
};

// A set in the algebra the learning rules quantify over: a finite union of
// rational intervals in [0,1], or a finite/cofinite subset of the naturals.
//
// Values are always in canonical form (sorted, disjoint, non-adjacent
// intervals; sorted unique integer lists), so operator== is set equality.
class MeasurableSet {
 public:
  enum class Form : std::uint8_t { kIntervals, kFinite, kCofinite };

  MeasurableSet() = default;  // empty subset of [0,1]

  static MeasurableSet empty(SpaceKind space);
  static MeasurableSet full(SpaceKind space);
  static MeasurableSet interval(Rational lo, Rational hi);
  static MeasurableSet from_intervals(std::vector<Interval> intervals);
  static MeasurableSet finite(std::vector<std::uint64_t> elements);
  static MeasurableSet cofinite(std::vector<std::uint64_t> excluded);

  // "[0,1/4)+[1/2,3/4)", "[1/2,1]", "()" for interval unions;
  // "{1,4,9}", "{}" and "~{0,1}" (everything but 0 and 1) for naturals.
  static MeasurableSet parse(std::string_view text);

  SpaceKind space() const { return form_ == Form::kIntervals ? SpaceKind::kUnit : SpaceKind::kNatural; }
  Form form() const { return form_; }
  const std::vector<Interval>& intervals() const { return intervals_; }
  // Members of a finite set, or the excluded points of a cofinite one.
  const std::vector<std::uint64_t>& elements() const { return elements_; }

  bool contains(const Point& x) const;
  bool is_empty() const;
  bool is_full() const;
  bool is_canonical() const;

  std::string to_string() const;

  friend bool operator==(const MeasurableSet&, const MeasurableSet&) = default;

 private:
  Form form_ = Form::kIntervals;
  std::vector<Interval> intervals_;
  std::vector<std::uint64_t> elements_;
};

MeasurableSet set_union(const MeasurableSet& a, const MeasurableSet& b);
MeasurableSet set_intersect(const MeasurableSet& a, const MeasurableSet& b);
MeasurableSet set_complement(const MeasurableSet& a);
MeasurableSet set_difference(const MeasurableSet& a, const MeasurableSet& b);
bool is_subset(const MeasurableSet& a, const MeasurableSet& b);

// Order key used to list partition cells deterministically: cells compare by
// their smallest member (infimum for interval unions).
bool cell_less(const MeasurableSet& a, const MeasurableSet& b);

}  // namespace ulab
