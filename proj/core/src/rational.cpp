#include "ulab/rational.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "ulab/error.hpp"

namespace ulab {

namespace {

__extension__ using i128 = __int128;
__extension__ using u128 = unsigned __int128;

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError("invalid rational literal '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw UsageError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if (frac_part.size() > 17) throw UsageError("too many decimals in '" + std::string(text) + "'");
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (negative) int_part.remove_prefix(1);
    std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
    std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    std::int64_t num = whole * scale + frac;
    return Rational(negative ? -num : num, scale);
  }
  return Rational(parse_int(text, text), 1);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const i128 lhs = static_cast<i128>(a.num_) * b.den_;
  const i128 rhs = static_cast<i128>(b.num_) * a.den_;
  return lhs <=> rhs;
}

std::strong_ordering compare_exact(double x, const Rational& r) {
  if (std::isnan(x)) throw UsageError("cannot compare NaN with a rational");
  if (std::isinf(x)) return x > 0 ? std::strong_ordering::greater : std::strong_ordering::less;
  // Reduce to nonnegative operands: x < r  <=>  -x > -r.
  if (x < 0 || (x == 0 && r.num() < 0)) {
    if (r.num() >= 0) return x == 0 && r.num() == 0 ? std::strong_ordering::equal
                                                    : std::strong_ordering::less;
    auto flipped = compare_exact(-x, Rational(-r.num(), r.den()));
    return 0 <=> flipped;
  }
  if (r.num() < 0) return std::strong_ordering::greater;
  if (x == 0) return r.num() == 0 ? std::strong_ordering::equal : std::strong_ordering::less;

  // x = mant * 2^exp with an integral 53-bit mantissa.
  int exp = 0;
  const double frac = std::frexp(x, &exp);
  const auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  exp -= 53;
  const auto num = static_cast<u128>(r.num());
  const auto den = static_cast<u128>(r.den());

  if (exp >= 0) {
    // Compare mant * 2^exp * den with num. Large shifts overflow only when the
    // left side is already far above any 64-bit numerator.
    if (exp > 70) return std::strong_ordering::greater;
    const u128 scaled = static_cast<u128>(mant) * den;
    if (exp > 0 && (scaled >> (127 - exp)) != 0) return std::strong_ordering::greater;
    const u128 lhs = scaled << exp;
    return lhs <=> num;
  }

  // Compare mant * den with num * 2^s, s = -exp > 0. mant * den < 2^117.
  const int s = -exp;
  const u128 lhs = static_cast<u128>(mant) * den;
  if (s >= 127) return num == 0 ? std::strong_ordering::greater : std::strong_ordering::less;
  const u128 floor_q = lhs >> s;
  if (floor_q != num) return floor_q <=> num;
  const u128 rem = lhs - (floor_q << s);
  return rem == 0 ? std::strong_ordering::equal : std::strong_ordering::greater;
}

}  // namespace ulab
