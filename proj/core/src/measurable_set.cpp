#include "ulab/measurable_set.hpp"

#include <algorithm>
#include <iterator>

#include "ulab/error.hpp"

namespace ulab {

namespace {

const Rational kZero{0};
const Rational kOne{1};

void require_same_space(const MeasurableSet& a, const MeasurableSet& b, const char* op) {
  if (a.space() != b.space()) {
    throw UsageError(std::string(op) + ": sets live in different instance spaces");
  }
}

std::vector<Interval> coalesce(std::vector<Interval> items) {
  std::sort(items.begin(), items.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> out;
  for (const auto& iv : items) {
    if (!(iv.lo < iv.hi)) continue;
    if (!out.empty() && iv.lo <= out.back().hi) {
      if (out.back().hi < iv.hi) out.back().hi = iv.hi;
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

std::vector<std::uint64_t> sorted_unique(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<std::uint64_t> merge_union(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint64_t> merge_intersect(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint64_t> merge_difference(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::uint64_t> parse_nat_list(std::string_view body, std::string_view whole) {
  std::vector<std::uint64_t> out;
  body = trim(body);
  if (body.empty()) return out;
  while (true) {
    auto comma = body.find(',');
    auto item = trim(body.substr(0, comma));
    Rational r = Rational::parse(item);
    if (r.den() != 1 || r.num() < 0) {
      throw UsageError("natural set literal '" + std::string(whole) + "' has a non-natural element");
    }
    out.push_back(static_cast<std::uint64_t>(r.num()));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

MeasurableSet MeasurableSet::empty(SpaceKind space) {
  return space == SpaceKind::kUnit ? MeasurableSet{} : finite({});
}

MeasurableSet MeasurableSet::full(SpaceKind space) {
  return space == SpaceKind::kUnit ? interval(kZero, kOne) : cofinite({});
}

MeasurableSet MeasurableSet::interval(Rational lo, Rational hi) {
  return from_intervals({Interval{lo, hi}});
}

MeasurableSet MeasurableSet::from_intervals(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    if (iv.lo < kZero || kOne < iv.hi || kOne < iv.lo || iv.hi < kZero) {
      throw UsageError("interval [" + iv.lo.to_string() + "," + iv.hi.to_string() + ") leaves [0,1]");
    }
  }
  MeasurableSet s;
  s.form_ = Form::kIntervals;
  s.intervals_ = coalesce(std::move(intervals));
  return s;
}

MeasurableSet MeasurableSet::finite(std::vector<std::uint64_t> elements) {
  MeasurableSet s;
  s.form_ = Form::kFinite;
  s.elements_ = sorted_unique(std::move(elements));
  return s;
}

MeasurableSet MeasurableSet::cofinite(std::vector<std::uint64_t> excluded) {
  MeasurableSet s;
  s.form_ = Form::kCofinite;
  s.elements_ = sorted_unique(std::move(excluded));
  return s;
}

MeasurableSet MeasurableSet::parse(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  if (text.empty()) throw UsageError("empty set literal");
  if (text == "()") return MeasurableSet{};
  if (text.front() == '~' || text.front() == '{') {
    const bool co = text.front() == '~';
    if (co) text = trim(text.substr(1));
    if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
      throw UsageError("malformed natural set literal '" + std::string(whole) + "'");
    }
    auto elems = parse_nat_list(text.substr(1, text.size() - 2), whole);
    return co ? cofinite(std::move(elems)) : finite(std::move(elems));
  }
  std::vector<Interval> pieces;
  while (!text.empty()) {
    auto plus = text.find('+');
    auto piece = trim(text.substr(0, plus));
    if (piece.size() < 5 || piece.front() != '[' || (piece.back() != ')' && piece.back() != ']')) {
      throw UsageError("malformed interval '" + std::string(piece) + "' in '" + std::string(whole) + "'");
    }
    auto body = piece.substr(1, piece.size() - 2);
    auto comma = body.find(',');
    if (comma == std::string_view::npos) {
      throw UsageError("interval without comma in '" + std::string(whole) + "'");
    }
    Rational lo = Rational::parse(body.substr(0, comma));
    Rational hi = Rational::parse(body.substr(comma + 1));
    if (hi < lo) throw UsageError("interval with reversed endpoints: '" + std::string(whole) + "'");
    if (piece.back() == ']' && hi != kOne) {
      throw UsageError("closed right endpoint is only representable at 1: '" + std::string(whole) + "'");
    }
    pieces.push_back(Interval{lo, hi});
    if (plus == std::string_view::npos) break;
    text.remove_prefix(plus + 1);
  }
  return from_intervals(std::move(pieces));
}

bool MeasurableSet::contains(const Point& x) const {
  if (x.space() != space()) {
    throw UsageError("set_contains: point " + x.to_string() + " is not in the set's instance space");
  }
  switch (form_) {
    case Form::kFinite:
      return std::binary_search(elements_.begin(), elements_.end(), x.nat());
    case Form::kCofinite:
      return !std::binary_search(elements_.begin(), elements_.end(), x.nat());
    case Form::kIntervals: {
      const double v = x.real();
      // First interval whose lower end exceeds v; the candidate is the one before it.
      auto it = std::upper_bound(intervals_.begin(), intervals_.end(), v, [](double value, const Interval& iv) {
        return compare_exact(value, iv.lo) < 0;
      });
      if (it == intervals_.begin()) return false;
      const Interval& iv = *std::prev(it);
      const auto upper = compare_exact(v, iv.hi);
      return upper < 0 || (upper == 0 && iv.hi == kOne);
    }
  }
  return false;
}

bool MeasurableSet::is_empty() const {
  return form_ == Form::kCofinite ? false : (form_ == Form::kFinite ? elements_.empty() : intervals_.empty());
}

bool MeasurableSet::is_full() const {
  switch (form_) {
    case Form::kCofinite:
      return elements_.empty();
    case Form::kFinite:
      return false;
    case Form::kIntervals:
      return intervals_.size() == 1 && intervals_[0].lo == kZero && intervals_[0].hi == kOne;
  }
  return false;
}

bool MeasurableSet::is_canonical() const {
  if (form_ != Form::kIntervals) {
    if (!intervals_.empty()) return false;
    return std::adjacent_find(elements_.begin(), elements_.end(),
                              [](std::uint64_t a, std::uint64_t b) { return !(a < b); }) == elements_.end();
  }
  if (!elements_.empty()) return false;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (!(iv.lo < iv.hi) || iv.lo < kZero || kOne < iv.hi) return false;
    // Touching neighbours must have been merged.
    if (i > 0 && !(intervals_[i - 1].hi < iv.lo)) return false;
  }
  return true;
}

std::string MeasurableSet::to_string() const {
  if (form_ != Form::kIntervals) {
    std::string out = form_ == Form::kCofinite ? "~{" : "{";
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(elements_[i]);
    }
    return out + "}";
  }
  if (intervals_.empty()) return "()";
  std::string out;
  for (const auto& iv : intervals_) {
    if (!out.empty()) out += "+";
    out += "[" + iv.lo.to_string() + "," + iv.hi.to_string() + (iv.hi == kOne ? "]" : ")");
  }
  return out;
}

MeasurableSet set_union(const MeasurableSet& a, const MeasurableSet& b) {
  require_same_space(a, b, "set_union");
  using Form = MeasurableSet::Form;
  if (a.form() == Form::kIntervals) {
    auto all = a.intervals();
    all.insert(all.end(), b.intervals().begin(), b.intervals().end());
    return MeasurableSet::from_intervals(std::move(all));
  }
  if (a.form() == Form::kFinite && b.form() == Form::kFinite) {
    return MeasurableSet::finite(merge_union(a.elements(), b.elements()));
  }
  if (a.form() == Form::kCofinite && b.form() == Form::kCofinite) {
    return MeasurableSet::cofinite(merge_intersect(a.elements(), b.elements()));
  }
  const auto& fin = a.form() == Form::kFinite ? a : b;
  const auto& cof = a.form() == Form::kFinite ? b : a;
  return MeasurableSet::cofinite(merge_difference(cof.elements(), fin.elements()));
}

MeasurableSet set_intersect(const MeasurableSet& a, const MeasurableSet& b) {
  require_same_space(a, b, "set_intersect");
  using Form = MeasurableSet::Form;
  if (a.form() == Form::kIntervals) {
    std::vector<Interval> out;
    const auto& x = a.intervals();
    const auto& y = b.intervals();
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
      const Rational lo = std::max(x[i].lo, y[j].lo);
      const Rational hi = std::min(x[i].hi, y[j].hi);
      if (lo < hi) out.push_back(Interval{lo, hi});
      if (x[i].hi < y[j].hi) ++i; else ++j;
    }
    return MeasurableSet::from_intervals(std::move(out));
  }
  if (a.form() == Form::kFinite && b.form() == Form::kFinite) {
    return MeasurableSet::finite(merge_intersect(a.elements(), b.elements()));
  }
  if (a.form() == Form::kCofinite && b.form() == Form::kCofinite) {
    return MeasurableSet::cofinite(merge_union(a.elements(), b.elements()));
  }
  const auto& fin = a.form() == Form::kFinite ? a : b;
  const auto& cof = a.form() == Form::kFinite ? b : a;
  return MeasurableSet::finite(merge_difference(fin.elements(), cof.elements()));
}

MeasurableSet set_complement(const MeasurableSet& a) {
  using Form = MeasurableSet::Form;
  switch (a.form()) {
    case Form::kFinite:
      return MeasurableSet::cofinite(a.elements());
    case Form::kCofinite:
      return MeasurableSet::finite(a.elements());
    case Form::kIntervals: {
      std::vector<Interval> gaps;
      Rational cursor = kZero;
      for (const auto& iv : a.intervals()) {
        if (cursor < iv.lo) gaps.push_back(Interval{cursor, iv.lo});
        cursor = iv.hi;
      }
      if (cursor < kOne) gaps.push_back(Interval{cursor, kOne});
      return MeasurableSet::from_intervals(std::move(gaps));
    }
  }
  return a;
}

MeasurableSet set_difference(const MeasurableSet& a, const MeasurableSet& b) {
  return set_intersect(a, set_complement(b));
}

bool is_subset(const MeasurableSet& a, const MeasurableSet& b) {
  return set_difference(a, b).is_empty();
}

bool cell_less(const MeasurableSet& a, const MeasurableSet& b) {
  using Form = MeasurableSet::Form;
  if (a.is_empty() != b.is_empty()) return b.is_empty();
  if (a.is_empty()) return false;
  if (a.form() == Form::kIntervals) return a.intervals().front().lo < b.intervals().front().lo;
  auto min_of = [](const MeasurableSet& s) -> std::uint64_t {
    if (s.form() == Form::kFinite) return s.elements().front();
    std::uint64_t candidate = 0;
    for (auto e : s.elements()) {
      if (e != candidate) break;
      ++candidate;
    }
    return candidate;
  };
  return min_of(a) < min_of(b);
}

}  // namespace ulab
