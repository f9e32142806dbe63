#include "ulab/simple_function.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <utility>

#include "ulab/error.hpp"

namespace ulab {
namespace {

const Rational kZero{0};
const Rational kOne{1};

struct Tile {
  Rational lo;
  Rational hi;
  std::size_t cell;
};

// Flattens an interval partition into tiles sorted by lower end and checks
// that they tile [0,1] exactly.
std::vector<Tile> tiles_of(const Partition& p, const char* name) {
  std::vector<Tile> tiles;
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (p[c].space() != SpaceKind::kUnit) throw UsageError(std::string(name) + ": mixed instance spaces");
    for (const auto& iv : p[c].intervals()) tiles.push_back(Tile{iv.lo, iv.hi, c});
  }
  std::sort(tiles.begin(), tiles.end(), [](const Tile& a, const Tile& b) { return a.lo < b.lo; });
  Rational cursor = kZero;
  for (const auto& t : tiles) {
    if (t.lo != cursor) {
      throw UsageError(std::string(name) + (t.lo < cursor ? ": cells overlap at " : ": cells leave a gap at ") +
                       (t.lo < cursor ? t.lo : cursor).to_string());
    }
    cursor = t.hi;
  }
  if (cursor != kOne) throw UsageError(std::string(name) + ": cells do not reach 1");
  return tiles;
}

// Natural-number partition view: the unique cofinite cell plus an explicit
// owner for every point any cell mentions.
struct NatView {
  std::size_t cofinite = 0;
  std::unordered_map<std::uint64_t, std::size_t> owner;
};

NatView nat_view_of(const Partition& p, const char* name) {
  NatView view;
  bool have_cofinite = false;
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (p[c].space() != SpaceKind::kNatural) throw UsageError(std::string(name) + ": mixed instance spaces");
    if (p[c].form() == MeasurableSet::Form::kCofinite) {
      if (have_cofinite) throw UsageError(std::string(name) + ": two cofinite cells overlap");
      have_cofinite = true;
      view.cofinite = c;
    }
  }
  if (!have_cofinite) throw UsageError(std::string(name) + ": finite cells cannot cover the naturals");
  const auto& excluded = p[view.cofinite].elements();
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (c == view.cofinite) continue;
    for (auto e : p[c].elements()) {
      if (!view.owner.emplace(e, c).second) {
        throw UsageError(std::string(name) + ": point " + std::to_string(e) + " lies in two cells");
      }
      if (!std::binary_search(excluded.begin(), excluded.end(), e)) {
        throw UsageError(std::string(name) + ": point " + std::to_string(e) + " lies in two cells");
      }
    }
  }
  for (auto e : excluded) {
    if (!view.owner.count(e)) throw UsageError(std::string(name) + ": point " + std::to_string(e) + " is uncovered");
  }
  return view;
}

std::size_t owner_of(const NatView& v, std::uint64_t e) {
  auto it = v.owner.find(e);
  return it == v.owner.end() ? v.cofinite : it->second;
}

}  // namespace

SimpleFunction::SimpleFunction(std::vector<MeasurableSet> cells, std::vector<Value> values, Value default_value)
    : cells_(std::move(cells)), values_(std::move(values)), default_(default_value) {
  if (cells_.size() != values_.size()) {
    throw UsageError("simple function: " + std::to_string(cells_.size()) + " cells but " +
                     std::to_string(values_.size()) + " values");
  }
  if (!cells_.empty()) space_ = cells_.front().space();
  for (const auto& c : cells_) {
    if (c.space() != space_) throw UsageError("simple function: cells over different instance spaces");
  }
  build_index();
}

SimpleFunction SimpleFunction::constant(SpaceKind space, Value value) {
  SimpleFunction f({MeasurableSet::full(space)}, {value}, value);
  return f;
}

void SimpleFunction::build_index() {
  if (space_ == SpaceKind::kUnit) {
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      for (const auto& iv : cells_[c].intervals()) {
        pieces_.push_back(Piece{iv.lo, iv.hi, static_cast<std::uint32_t>(c)});
      }
    }
    std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    for (std::size_t k = 1; k < pieces_.size(); ++k) {
      if (pieces_[k].lo < pieces_[k - 1].hi) {
        throw UsageError("simple function: cells overlap near " + pieces_[k].lo.to_string());
      }
    }
    return;
  }
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c].form() == MeasurableSet::Form::kCofinite) {
      if (cofinite_cell_) throw UsageError("simple function: two cofinite cells overlap");
      cofinite_cell_ = static_cast<std::uint32_t>(c);
      continue;
    }
    for (auto e : cells_[c].elements()) members_.emplace_back(e, static_cast<std::uint32_t>(c));
  }
  std::sort(members_.begin(), members_.end());
  for (std::size_t k = 1; k < members_.size(); ++k) {
    if (members_[k].first == members_[k - 1].first) {
      throw UsageError("simple function: point " + std::to_string(members_[k].first) + " lies in two cells");
    }
  }
  if (cofinite_cell_) {
    const auto& excluded = cells_[*cofinite_cell_].elements();
    for (const auto& [e, c] : members_) {
      if (!std::binary_search(excluded.begin(), excluded.end(), e)) {
        throw UsageError("simple function: point " + std::to_string(e) + " lies in two cells");
      }
    }
  }
}

std::optional<std::size_t> SimpleFunction::locate(const Point& x) const {
  if (x.space() != space_) {
    throw UsageError("simple function: point " + x.to_string() + " is not in the function's instance space");
  }
  if (space_ == SpaceKind::kUnit) {
    const double v = x.real();
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), v,
                               [](double value, const Piece& p) { return compare_exact(value, p.lo) < 0; });
    if (it == pieces_.begin()) return std::nullopt;
    const Piece& p = *std::prev(it);
    const auto upper = compare_exact(v, p.hi);
    if (upper < 0 || (upper == 0 && p.hi == kOne)) return p.cell;
    return std::nullopt;
  }
  const auto n = x.nat();
  auto it = std::lower_bound(members_.begin(), members_.end(), std::make_pair(n, std::uint32_t{0}));
  if (it != members_.end() && it->first == n) return it->second;
  if (cofinite_cell_ && cells_[*cofinite_cell_].contains(x)) return *cofinite_cell_;
  return std::nullopt;
}

Value SimpleFunction::operator()(const Point& x) const {
  auto cell = locate(x);
  return cell ? values_[*cell] : default_;
}

Partition SimpleFunction::partition() const {
  Partition out;
  MeasurableSet covered = MeasurableSet::empty(space_);
  for (const auto& c : cells_) {
    if (c.is_empty()) continue;
    out.push_back(c);
    covered = set_union(covered, c);
  }
  auto rest = set_complement(covered);
  if (!rest.is_empty()) out.push_back(std::move(rest));
  return out;
}

std::vector<Value> SimpleFunction::partition_values() const {
  std::vector<Value> out;
  MeasurableSet covered = MeasurableSet::empty(space_);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c].is_empty()) continue;
    out.push_back(values_[c]);
    covered = set_union(covered, cells_[c]);
  }
  if (!set_complement(covered).is_empty()) out.push_back(default_);
  return out;
}

std::vector<RefinedCell> refine_with_sources(const Partition& p1, const Partition& p2) {
  if (p1.empty() || p2.empty()) throw UsageError("partition_refine: empty partition");
  const SpaceKind space = p1.front().space();
  std::vector<RefinedCell> out;
  if (space == SpaceKind::kUnit) {
    const auto a = tiles_of(p1, "partition_refine");
    const auto b = tiles_of(p2, "partition_refine");
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Interval>> groups;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      const Rational lo = std::max(a[i].lo, b[j].lo);
      const Rational hi = std::min(a[i].hi, b[j].hi);
      if (lo < hi) groups[{a[i].cell, b[j].cell}].push_back(Interval{lo, hi});
      if (a[i].hi < b[j].hi) {
        ++i;
      } else if (b[j].hi < a[i].hi) {
        ++j;
      } else {
        ++i;
        ++j;
      }
    }
    for (auto& [key, ivs] : groups) {
      out.push_back(RefinedCell{MeasurableSet::from_intervals(std::move(ivs)), key.first, key.second});
    }
  } else {
    const auto a = nat_view_of(p1, "partition_refine");
    const auto b = nat_view_of(p2, "partition_refine");
    std::vector<std::uint64_t> mentioned;
    for (const auto& [e, c] : a.owner) mentioned.push_back(e);
    for (const auto& [e, c] : b.owner) mentioned.push_back(e);
    std::sort(mentioned.begin(), mentioned.end());
    mentioned.erase(std::unique(mentioned.begin(), mentioned.end()), mentioned.end());
    const std::pair<std::size_t, std::size_t> rest_key{a.cofinite, b.cofinite};
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::uint64_t>> groups;
    std::vector<std::uint64_t> rest_excluded;
    for (auto e : mentioned) {
      std::pair<std::size_t, std::size_t> key{owner_of(a, e), owner_of(b, e)};
      if (key == rest_key) continue;
      groups[key].push_back(e);
      rest_excluded.push_back(e);
    }
    for (auto& [key, elems] : groups) {
      out.push_back(RefinedCell{MeasurableSet::finite(std::move(elems)), key.first, key.second});
    }
    out.push_back(RefinedCell{MeasurableSet::cofinite(std::move(rest_excluded)), rest_key.first, rest_key.second});
  }
  std::sort(out.begin(), out.end(), [](const RefinedCell& x, const RefinedCell& y) { return cell_less(x.set, y.set); });
  return out;
}

Partition partition_refine(const Partition& p1, const Partition& p2) {
  Partition out;
  for (auto& cell : refine_with_sources(p1, p2)) out.push_back(std::move(cell.set));
  return out;
}

bool is_partition(const Partition& p, SpaceKind space) {
  if (p.empty()) return false;
  for (const auto& c : p) {
    if (c.space() != space) return false;
  }
  try {
    if (space == SpaceKind::kUnit) {
      tiles_of(p, "is_partition");
    } else {
      nat_view_of(p, "is_partition");
    }
  } catch (const UsageError&) {
    return false;
  }
  return true;
}

}  // namespace ulab
