#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ulab {

// Every value space in the lab embeds in the reals, so labels and predictions
// are plain doubles: {0,1}, {0..K-1}, the naturals, or [0,1].
using Value = double;

enum class ValueKind : std::uint8_t { kBinary, kFiniteLabel, kNatural, kUnitReal };
enum class LossKind : std::uint8_t { kZeroOne, kAbsolute, kSquared };

std::string to_string(ValueKind kind);
std::string to_string(LossKind kind);
ValueKind parse_value_kind(const std::string& text);
LossKind parse_loss_kind(const std::string& text);

// A value space together with its loss function.
class LossSpace {
 public:
  LossSpace() = default;
  LossSpace(ValueKind values, LossKind loss, std::uint32_t labels = 2);

  ValueKind values() const { return values_; }
  LossKind kind() const { return loss_; }
  std::uint32_t labels() const { return labels_; }

  // Throws UsageError when either argument lies outside the value space.
  double loss(Value a, Value b) const;
  // Unchecked variant for inner loops whose inputs are known to be valid.
  double loss_unchecked(Value a, Value b) const {
    const double d = a > b ? a - b : b - a;
    switch (loss_) {
      case LossKind::kZeroOne: return a == b ? 0.0 : 1.0;
      case LossKind::kAbsolute: return d;
      case LossKind::kSquared: return d * d;
    }
    return 0.0;
  }

  bool contains(Value y) const;
  // sup of the loss over pairs of values; +infinity for unbounded spaces.
  double sup_loss() const;
  bool bounded() const;
  bool is_metric() const { return loss_ != LossKind::kSquared; }
  // True when the value space is a finite set (binary or K labels).
  bool finite_values() const;
  // All values of a finite value space, in increasing order.
  std::vector<Value> finite_value_list() const;

  // For losses that are not metrics: the dominating metric and the map phi
  // with loss(a,b) = phi(metric(a,b)). Squared loss reports absolute loss and
  // phi(x) = x^2.
  std::optional<LossSpace> dominating_metric() const;
  double phi(double metric_value) const;

  std::string to_string() const;

  friend bool operator==(const LossSpace&, const LossSpace&) = default;

 private:
  ValueKind values_ = ValueKind::kBinary;
  LossKind loss_ = LossKind::kZeroOne;
  std::uint32_t labels_ = 2;
};

}  // namespace ulab
