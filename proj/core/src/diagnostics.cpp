#include "ulab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "ulab/error.hpp"

namespace ulab {
namespace {

std::vector<MeasurableSet> parse_list(const std::string& text, const char* what) {
  std::vector<MeasurableSet> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    try {
      out.push_back(MeasurableSet::parse(item));
    } catch (const Error& e) {
      throw ConfigError(std::string(what) + ": " + e.what());
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + ": no sets given");
  return out;
}

std::uint64_t parse_count(const std::string& digits, const std::string& whole, const char* what) {
  if (digits.empty() || digits.size() > 9 || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(std::string(what) + ": bad count in '" + whole + "'");
  }
  return std::stoull(digits);
}

void check_checkpoints(const std::vector<std::uint64_t>& cps, std::size_t horizon) {
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] == 0 || cps[i] > horizon) {
      throw ConfigError("checkpoints: " + std::to_string(cps[i]) + " outside [1, " + std::to_string(horizon) + "]");
    }
    if (i > 0 && cps[i] <= cps[i - 1]) throw ConfigError("checkpoints: must be strictly increasing");
  }
}

std::string join(const std::vector<MeasurableSet>& sets) {
  std::string out;
  for (const auto& s : sets) {
    if (!out.empty()) out += ";";
    out += s.to_string();
  }
  return out;
}

// Dense ids with the remainder mapped to `cells`.
std::vector<std::size_t> densify(const std::vector<std::int64_t>& raw, std::size_t& cells) {
  std::unordered_map<std::int64_t, std::size_t> ids;
  std::vector<std::size_t> out(raw.size());
  for (std::size_t t = 0; t < raw.size(); ++t) {
    if (raw[t] < 0) continue;
    out[t] = ids.emplace(raw[t], ids.size()).first->second;
  }
  cells = ids.size();
  for (std::size_t t = 0; t < raw.size(); ++t) {
    if (raw[t] < 0) out[t] = cells;
  }
  return out;
}

}  // namespace

CellFamily CellFamily::explicit_cells(std::vector<MeasurableSet> cells) {
  if (cells.empty()) throw ConfigError("sets: no cells given");
  CellFamily f;
  f.kind_ = Kind::kExplicit;
  std::vector<Value> ids;
  for (std::size_t i = 0; i < cells.size(); ++i) ids.push_back(static_cast<Value>(i));
  try {
    f.index_.emplace(cells, std::move(ids), -1.0);
  } catch (const UsageError& e) {
    throw ConfigError(std::string("sets: ") + e.what());
  }
  f.cells_ = std::move(cells);
  return f;
}

CellFamily CellFamily::singletons() { return CellFamily(); }

CellFamily CellFamily::dyadic(std::uint32_t level) {
  if (level > 30) throw ConfigError("sets: dyadic level above 30");
  CellFamily f;
  f.kind_ = Kind::kDyadic;
  f.level_ = level;
  return f;
}

CellFamily CellFamily::parse(const std::string& text) {
  if (text == "singletons") return singletons();
  if (text.rfind("dyadic:", 0) == 0) return dyadic(static_cast<std::uint32_t>(parse_count(text.substr(7), text, "sets")));
  return explicit_cells(parse_list(text, "sets"));
}

std::string CellFamily::to_string() const {
  switch (kind_) {
    case Kind::kSingletons: return "singletons";
    case Kind::kDyadic: return "dyadic:" + std::to_string(level_);
    case Kind::kExplicit: return join(cells_);
  }
  return "";
}

std::vector<std::int64_t> CellFamily::label(const std::vector<Point>& sample) const {
  std::vector<std::int64_t> out(sample.size(), -1);
  switch (kind_) {
    case Kind::kSingletons: {
      std::unordered_map<Point, std::int64_t, PointHash> ids;
      for (std::size_t t = 0; t < sample.size(); ++t) {
        out[t] = ids.emplace(sample[t], static_cast<std::int64_t>(ids.size())).first->second;
      }
      break;
    }
    case Kind::kDyadic: {
      const std::int64_t cells = std::int64_t{1} << level_;
      for (std::size_t t = 0; t < sample.size(); ++t) {
        if (!sample[t].is_unit()) throw UsageError("dyadic cells need points of [0,1]");
        auto c = static_cast<std::int64_t>(std::ldexp(sample[t].real(), static_cast<int>(level_)));
        out[t] = std::min(c, cells - 1);
      }
      break;
    }
    case Kind::kExplicit:
      for (std::size_t t = 0; t < sample.size(); ++t) out[t] = static_cast<std::int64_t>((*index_)(sample[t]));
      break;
  }
  return out;
}

MonotoneFamily MonotoneFamily::explicit_sets(std::vector<MeasurableSet> sets) {
  if (sets.empty()) throw ConfigError("sets: no sets given");
  for (std::size_t k = 1; k < sets.size(); ++k) {
    if (sets[k].space() != sets[0].space() || !is_subset(sets[k], sets[k - 1])) {
      throw ConfigError("sets: set " + std::to_string(k + 1) + " is not contained in set " + std::to_string(k) +
                        "; the sequence must be decreasing");
    }
  }
  MonotoneFamily f;
  f.kind_ = Kind::kExplicit;
  f.count_ = sets.size();
  f.sets_ = std::move(sets);
  return f;
}

MonotoneFamily MonotoneFamily::tails(std::uint64_t count) {
  MonotoneFamily f;
  f.kind_ = Kind::kTails;
  f.count_ = count;
  return f;
}

MonotoneFamily MonotoneFamily::halvings(std::uint64_t count) {
  if (count > 1074) throw ConfigError("sets: at most 1074 halvings are representable");
  MonotoneFamily f;
  f.kind_ = Kind::kHalvings;
  f.count_ = count;
  return f;
}

MonotoneFamily MonotoneFamily::parse(const std::string& text) {
  if (text.rfind("tails:", 0) == 0) return tails(parse_count(text.substr(6), text, "sets"));
  if (text.rfind("halvings:", 0) == 0) return halvings(parse_count(text.substr(9), text, "sets"));
  return explicit_sets(parse_list(text, "sets"));
}

std::string MonotoneFamily::to_string() const {
  switch (kind_) {
    case Kind::kTails: return "tails:" + std::to_string(count_);
    case Kind::kHalvings: return "halvings:" + std::to_string(count_);
    case Kind::kExplicit: return join(sets_);
  }
  return "";
}

std::uint64_t MonotoneFamily::depth(const Point& x) const {
  switch (kind_) {
    case Kind::kTails:
      if (!x.is_natural()) throw UsageError("tail sets need points of the naturals");
      return std::min(count_, x.nat());
    case Kind::kHalvings: {
      if (!x.is_unit()) throw UsageError("halvings need points of [0,1]");
      std::uint64_t k = 0;
      while (k < count_ && x.real() < std::ldexp(1.0, -static_cast<int>(k + 1))) ++k;
      return k;
    }
    case Kind::kExplicit: {
      std::uint64_t k = 0;
      while (k < count_ && sets_[k].contains(x)) ++k;
      return k;
    }
  }
  return 0;
}

Curve condition1_curve(const std::vector<Point>& sample, const CellFamily& cells,
                       const std::vector<std::uint64_t>& checkpoints, std::uint64_t tail_start) {
  if (sample.empty()) throw UsageError("condition1_curve: empty sample");
  check_checkpoints(checkpoints, sample.size());
  const std::size_t horizon = sample.size();
  const std::size_t tail = tail_start ? tail_start : (horizon + 3) / 4;
  if (tail > horizon) throw ConfigError("condition1_curve: tail start beyond the horizon");
  std::size_t count = 0;
  const auto ids = densify(cells.label(sample), count);
  std::vector<bool> visited(count + 1, false);
  Curve out;
  std::size_t seen = 0;
  for (auto n : checkpoints) {
    for (; seen < n; ++seen) visited[ids[seen]] = true;
    std::size_t hits = 0;
    double best = 0.0;
    for (std::size_t m = 1; m <= horizon; ++m) {
      if (!visited[ids[m - 1]]) ++hits;
      if (m >= tail) best = std::max(best, static_cast<double>(hits) / static_cast<double>(m));
    }
    out.emplace_back(n, best);
  }
  return out;
}

Curve condition2_curve(const std::vector<Point>& sample, const CellFamily& cells,
                       const std::vector<std::uint64_t>& checkpoints) {
  check_checkpoints(checkpoints, sample.size());
  std::size_t count = 0;
  const auto ids = densify(cells.label(sample), count);
  std::vector<bool> visited(count + 1, false);
  std::uint64_t distinct = 0;
  Curve out;
  std::size_t seen = 0;
  for (auto T : checkpoints) {
    for (; seen < T; ++seen) {
      if (ids[seen] == count || visited[ids[seen]]) continue;
      visited[ids[seen]] = true;
      ++distinct;
    }
    out.emplace_back(T, static_cast<double>(distinct) / static_cast<double>(T));
  }
  return out;
}

std::uint64_t condition3_count(const std::vector<Point>& sample, const MonotoneFamily& sets) {
  std::uint64_t deepest = 0;
  for (const auto& x : sample) deepest = std::max(deepest, sets.depth(x));
  return deepest;
}

Curve condition3_curve(const std::vector<Point>& sample, const MonotoneFamily& sets,
                       const std::vector<std::uint64_t>& checkpoints) {
  check_checkpoints(checkpoints, sample.size());
  Curve out;
  std::uint64_t deepest = 0;
  std::size_t seen = 0;
  for (auto T : checkpoints) {
    for (; seen < T; ++seen) deepest = std::max(deepest, sets.depth(sample[seen]));
    out.emplace_back(T, static_cast<double>(deepest));
  }
  return out;
}

Bracket crf_probe(const std::vector<Point>& sample, const MeasurableSet& a, const std::vector<std::uint64_t>& checkpoints) {
  check_checkpoints(checkpoints, sample.size());
  if (checkpoints.empty()) throw ConfigError("crf_probe: no checkpoints");
  Bracket b{1.0, 0.0};
  std::size_t hits = 0;
  std::size_t seen = 0;
  for (auto m : checkpoints) {
    for (; seen < m; ++seen) {
      if (a.contains(sample[seen])) ++hits;
    }
    const double f = static_cast<double>(hits) / static_cast<double>(m);
    b.min = std::min(b.min, f);
    b.max = std::max(b.max, f);
  }
  return b;
}

}  // namespace ulab
