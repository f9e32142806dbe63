#include "ulab/loss.hpp"

#include <cmath>
#include <limits>

#include "ulab/error.hpp"

namespace ulab {

std::string to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::kBinary: return "binary";
    case ValueKind::kFiniteLabel: return "finite";
    case ValueKind::kNatural: return "natural";
    case ValueKind::kUnitReal: return "unit";
  }
  return "?";
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kZeroOne: return "zero_one";
    case LossKind::kAbsolute: return "absolute";
    case LossKind::kSquared: return "squared";
  }
  return "?";
}

ValueKind parse_value_kind(const std::string& text) {
  if (text == "binary") return ValueKind::kBinary;
  if (text == "finite") return ValueKind::kFiniteLabel;
  if (text == "natural") return ValueKind::kNatural;
  if (text == "unit") return ValueKind::kUnitReal;
  throw ConfigError("unknown value space '" + text + "' (binary|finite|natural|unit)");
}

LossKind parse_loss_kind(const std::string& text) {
  if (text == "zero_one") return LossKind::kZeroOne;
  if (text == "absolute") return LossKind::kAbsolute;
  if (text == "squared") return LossKind::kSquared;
  throw ConfigError("unknown loss '" + text + "' (zero_one|absolute|squared)");
}

LossSpace::LossSpace(ValueKind values, LossKind loss, std::uint32_t labels)
    : values_(values), loss_(loss), labels_(values == ValueKind::kBinary ? 2 : labels) {
  if (values_ == ValueKind::kFiniteLabel && labels_ < 2) {
    throw UsageError("finite label space needs at least two labels");
  }
  if (values_ != ValueKind::kFiniteLabel && values_ != ValueKind::kBinary) labels_ = 0;
}

bool LossSpace::contains(Value y) const {
  if (!std::isfinite(y)) return false;
  switch (values_) {
    case ValueKind::kBinary: return y == 0.0 || y == 1.0;
    case ValueKind::kFiniteLabel: return y >= 0.0 && y < labels_ && y == std::floor(y);
    case ValueKind::kNatural: return y >= 0.0 && y == std::floor(y);
    case ValueKind::kUnitReal: return y >= 0.0 && y <= 1.0;
  }
  return false;
}

double LossSpace::loss(Value a, Value b) const {
  if (!contains(a) || !contains(b)) {
    throw UsageError("loss: value outside " + to_string() + " (" + std::to_string(a) + ", " + std::to_string(b) + ")");
  }
  return loss_unchecked(a, b);
}

double LossSpace::sup_loss() const {
  if (loss_ == LossKind::kZeroOne) return 1.0;
  double diameter = 0.0;
  switch (values_) {
    case ValueKind::kBinary:
    case ValueKind::kUnitReal: diameter = 1.0; break;
    case ValueKind::kFiniteLabel: diameter = static_cast<double>(labels_ - 1); break;
    case ValueKind::kNatural: return std::numeric_limits<double>::infinity();
  }
  return loss_ == LossKind::kSquared ? diameter * diameter : diameter;
}

bool LossSpace::bounded() const { return std::isfinite(sup_loss()); }

bool LossSpace::finite_values() const {
  return values_ == ValueKind::kBinary || values_ == ValueKind::kFiniteLabel;
}

std::vector<Value> LossSpace::finite_value_list() const {
  if (!finite_values()) throw UsageError("value space " + to_string() + " is not finite");
  std::vector<Value> out(labels_);
  for (std::uint32_t k = 0; k < labels_; ++k) out[k] = static_cast<Value>(k);
  return out;
}

std::optional<LossSpace> LossSpace::dominating_metric() const {
  if (loss_ != LossKind::kSquared) return std::nullopt;
  return LossSpace(values_, LossKind::kAbsolute, labels_);
}

double LossSpace::phi(double metric_value) const {
  return loss_ == LossKind::kSquared ? metric_value * metric_value : metric_value;
}

std::string LossSpace::to_string() const {
  std::string vs = ulab::to_string(values_);
  if (values_ == ValueKind::kFiniteLabel) vs += "(" + std::to_string(labels_) + ")";
  return vs + "/" + ulab::to_string(loss_);
}

}  // namespace ulab
