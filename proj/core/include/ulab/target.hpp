#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ulab/loss.hpp"
#include "ulab/simple_function.hpp"

namespace ulab {

// i-th binary digit of kappa in [0,1): floor(2^i kappa) - 2 floor(2^{i-1} kappa).
int kappa_bit(double kappa, std::uint64_t i);

// Partition {A_1, A_2, ...} indexing the digits of a kappa target.
class KappaPartition {
 public:
  enum class Kind : std::uint8_t { kExplicit, kSingletons, kDyadic };

  static KappaPartition explicit_cells(std::vector<MeasurableSet> cells);
  // A_i = {i-1} on the naturals.
  static KappaPartition singletons();
  // A_i = [(i-1)/2^L, i/2^L) on [0,1].
  static KappaPartition dyadic(std::uint32_t level);
  // "singletons", "dyadic:L", or a list of set literals separated by ';'.
  static KappaPartition parse(const std::string& text);

  Kind kind() const { return kind_; }
  SpaceKind space() const;
  // 1-based index of the cell containing x; UsageError when no cell does.
  std::uint64_t index_of(const Point& x) const;
  std::string to_string() const;

 private:
  Kind kind_ = Kind::kSingletons;
  std::uint32_t level_ = 0;
  std::vector<MeasurableSet> cells_;
};

class TargetFunction {
 public:
  enum class Kind : std::uint8_t { kSimple, kKappa, kNnKiller };

  static TargetFunction simple(SimpleFunction f);
  static TargetFunction constant(SpaceKind space, Value v);
  static TargetFunction kappa(double kappa, KappaPartition partition, Value y0, Value y1);
  // y0 on the deterministic grid of the nearest-neighbour counterexample, y1 elsewhere.
  static TargetFunction nn_killer(Value y0, Value y1);

  Kind kind() const { return kind_; }
  SpaceKind space() const;
  Value operator()(const Point& x) const;
  std::string describe() const;

 private:
  TargetFunction() = default;

  Kind kind_ = Kind::kSimple;
  std::optional<SimpleFunction> simple_;
  double kappa_ = 0.0;
  std::optional<KappaPartition> partition_;
  Value y0_ = 0.0;
  Value y1_ = 1.0;
};

inline Value target_eval(const TargetFunction& f, const Point& x) { return f(x); }

}  // namespace ulab
