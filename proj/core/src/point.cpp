#include "ulab/point.hpp"

#include <bit>
#include <cmath>
#include <cstdio>

#include "ulab/error.hpp"

namespace ulab {

std::string to_string(SpaceKind kind) {
  return kind == SpaceKind::kUnit ? "unit" : "natural";
}

Point Point::unit(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw UsageError("unit-interval point out of range: " + std::to_string(x));
  }
  // Normalise -0.0 so that equal points hash equally.
  return Point(SpaceKind::kUnit, x == 0.0 ? 0.0 : x, 0);
}

std::string Point::to_string() const {
  if (is_natural()) return std::to_string(nat_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", real_);
  return buf;
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
  std::uint64_t h = p.is_natural() ? p.nat() : std::bit_cast<std::uint64_t>(p.real());
  h ^= p.is_natural() ? 0x9e3779b97f4a7c15ULL : 0;
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return static_cast<std::size_t>(h);
}

}  // namespace ulab
