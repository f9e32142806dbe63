#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace ulab {

// The two instance spaces the lab supports: the closed unit interval and the
// natural numbers.
enum class SpaceKind : std::uint8_t { kUnit, kNatural };

std::string to_string(SpaceKind kind);

// A point of an instance space. Unit points carry a real in [0,1], natural
// points a nonnegative integer.
class Point {
 public:
  Point() = default;

  static Point unit(double x);
  static Point natural(std::uint64_t n) { return Point(SpaceKind::kNatural, 0.0, n); }

  SpaceKind space() const { return space_; }
  bool is_unit() const { return space_ == SpaceKind::kUnit; }
  bool is_natural() const { return space_ == SpaceKind::kNatural; }

  double real() const { return real_; }
  std::uint64_t nat() const { return nat_; }

  std::string to_string() const;

  friend bool operator==(const Point& a, const Point& b) {
    return a.space_ == b.space_ && a.real_ == b.real_ && a.nat_ == b.nat_;
  }

 private:
  Point(SpaceKind space, double real, std::uint64_t nat) : space_(space), real_(real), nat_(nat) {}

  SpaceKind space_ = SpaceKind::kUnit;
  double real_ = 0.0;
  std::uint64_t nat_ = 0;
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept;
};

}  // namespace ulab
