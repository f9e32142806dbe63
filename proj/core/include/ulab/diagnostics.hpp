#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ulab/measurable_set.hpp"
#include "ulab/simple_function.hpp"

namespace ulab {

// Attached to every diagnostic record. The outputs are curves and brackets,
// never verdicts.
inline constexpr const char* kDiagnosticCaveat =
    "finite-horizon evidence; no consistent test exists (Theorem: no consistent hypothesis test for SUIL)";

// A sequence of pairwise disjoint cells. Points outside every cell belong to an
// implicit remainder, which counts as a cell for Condition 1 but not for
// Condition 2.
class CellFamily {
 public:
  enum class Kind : std::uint8_t { kExplicit, kSingletons, kDyadic };

  static CellFamily explicit_cells(std::vector<MeasurableSet> cells);
  // Every point is its own cell.
  static CellFamily singletons();
  // [j/2^L, (j+1)/2^L) on [0,1].
  static CellFamily dyadic(std::uint32_t level);
  // "singletons", "dyadic:L", or set literals separated by ';'.
  static CellFamily parse(const std::string& text);

  Kind kind() const { return kind_; }
  std::string to_string() const;

  // Cell ids for a sample; -1 marks the remainder.
  std::vector<std::int64_t> label(const std::vector<Point>& sample) const;

 private:
  Kind kind_ = Kind::kSingletons;
  std::uint32_t level_ = 0;
  std::vector<MeasurableSet> cells_;
  std::optional<SimpleFunction> index_;
};

// A decreasing sequence A_1 ⊇ A_2 ⊇ ... of sets.
class MonotoneFamily {
 public:
  static MonotoneFamily explicit_sets(std::vector<MeasurableSet> sets);
  // A_k = {k, k+1, ...} on the naturals, k = 1..count.
  static MonotoneFamily tails(std::uint64_t count);
  // A_k = [0, 2^-k) on [0,1], k = 1..count.
  static MonotoneFamily halvings(std::uint64_t count);
  // "tails:K", "halvings:K", or set literals separated by ';'.
  static MonotoneFamily parse(const std::string& text);

  std::uint64_t size() const { return count_; }
  std::string to_string() const;
  // Largest k with x in A_k (0 when x lies in none).
  std::uint64_t depth(const Point& x) const;

 private:
  enum class Kind : std::uint8_t { kExplicit, kTails, kHalvings };
  Kind kind_ = Kind::kTails;
  std::uint64_t count_ = 0;
  std::vector<MeasurableSet> sets_;
};

using Curve = std::vector<std::pair<std::uint64_t, double>>;

// For each checkpoint n: the limsup proxy (max prefix frequency over
// [tail_start, T]) of the union of cells X_{1:n} has not visited.
// tail_start = 0 selects ceil(T/4).
Curve condition1_curve(const std::vector<Point>& sample, const CellFamily& cells,
                       const std::vector<std::uint64_t>& checkpoints, std::uint64_t tail_start = 0);

// For each checkpoint T: |{k : X_{1:T} meets A_k}| / T.
Curve condition2_curve(const std::vector<Point>& sample, const CellFamily& cells,
                       const std::vector<std::uint64_t>& checkpoints);

// Number of k with X_{1:T} meeting A_k, at T = |sample|.
std::uint64_t condition3_count(const std::vector<Point>& sample, const MonotoneFamily& sets);
Curve condition3_curve(const std::vector<Point>& sample, const MonotoneFamily& sets,
                       const std::vector<std::uint64_t>& checkpoints);

struct Bracket {
  double min = 0.0;
  double max = 0.0;
};

// Extremes of the prefix frequency of A over the checkpoints.
Bracket crf_probe(const std::vector<Point>& sample, const MeasurableSet& a, const std::vector<std::uint64_t>& checkpoints);

}  // namespace ulab
