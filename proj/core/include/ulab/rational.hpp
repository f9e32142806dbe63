#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace ulab {

// Exact rational number with 64-bit numerator and positive denominator, always
// stored in lowest terms so that structural equality is value equality.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  // Accepts "p", "p/q" and finite decimal literals such as "0.375".
  static Rational parse(std::string_view text);

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Exact three-way comparison of a finite double against a rational. Every
// finite double is a dyadic rational, so no rounding is involved.
std::strong_ordering compare_exact(double x, const Rational& r);

}  // namespace ulab
