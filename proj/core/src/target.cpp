#include "ulab/target.hpp"

#include <cmath>
#include <sstream>

#include "ulab/error.hpp"
#include "ulab/process.hpp"

namespace ulab {

int kappa_bit(double kappa, std::uint64_t i) {
  if (!(kappa >= 0.0 && kappa < 1.0)) throw UsageError("kappa_bit: kappa must lie in [0,1)");
  if (i == 0) throw UsageError("kappa_bit: bit index must be positive");
  if (kappa == 0.0) return 0;
  // kappa = M * 2^(e-53) with a 53-bit integer M; digit i sits at bit 53-e-i of M.
  int e = 0;
  const double m = std::frexp(kappa, &e);
  const auto mantissa = static_cast<std::uint64_t>(std::ldexp(m, 53));
  if (i > 1200) return 0;
  const long pos = 53L - e - static_cast<long>(i);
  if (pos < 0 || pos > 52) return 0;
  return static_cast<int>((mantissa >> pos) & 1U);
}

KappaPartition KappaPartition::explicit_cells(std::vector<MeasurableSet> cells) {
  if (cells.empty()) throw ConfigError("target.partition: needs at least one cell");
  const SpaceKind space = cells.front().space();
  for (std::size_t a = 0; a < cells.size(); ++a) {
    if (cells[a].space() != space) throw ConfigError("target.partition: cells over different spaces");
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      if (!set_intersect(cells[a], cells[b]).is_empty()) {
        throw ConfigError("target.partition: cells " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                          " overlap");
      }
    }
  }
  KappaPartition p;
  p.kind_ = Kind::kExplicit;
  p.cells_ = std::move(cells);
  return p;
}

KappaPartition KappaPartition::singletons() {
  KappaPartition p;
  p.kind_ = Kind::kSingletons;
  return p;
}

KappaPartition KappaPartition::dyadic(std::uint32_t level) {
  if (level > 30) throw ConfigError("target.partition: dyadic level above 30");
  KappaPartition p;
  p.kind_ = Kind::kDyadic;
  p.level_ = level;
  return p;
}

KappaPartition KappaPartition::parse(const std::string& text) {
  if (text == "singletons") return singletons();
  if (text.rfind("dyadic:", 0) == 0) {
    const std::string digits = text.substr(7);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("target.partition: bad dyadic level in '" + text + "'");
    }
    return dyadic(static_cast<std::uint32_t>(std::stoul(digits)));
  }
  std::vector<MeasurableSet> cells;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    try {
      cells.push_back(MeasurableSet::parse(item));
    } catch (const Error& e) {
      throw ConfigError(std::string("target.partition: ") + e.what());
    }
  }
  return explicit_cells(std::move(cells));
}

SpaceKind KappaPartition::space() const {
  switch (kind_) {
    case Kind::kSingletons: return SpaceKind::kNatural;
    case Kind::kDyadic: return SpaceKind::kUnit;
    case Kind::kExplicit: return cells_.front().space();
  }
  return SpaceKind::kUnit;
}

std::uint64_t KappaPartition::index_of(const Point& x) const {
  if (x.space() != space()) throw UsageError("kappa target: point " + x.to_string() + " in wrong instance space");
  switch (kind_) {
    case Kind::kSingletons:
      return x.nat() + 1;
    case Kind::kDyadic: {
      const std::uint64_t cells = std::uint64_t{1} << level_;
      auto c = static_cast<std::uint64_t>(std::ldexp(x.real(), static_cast<int>(level_)));
      if (c >= cells) c = cells - 1;
      return c + 1;
    }
    case Kind::kExplicit:
      for (std::size_t i = 0; i < cells_.size(); ++i) {
        if (cells_[i].contains(x)) return i + 1;
      }
      throw UsageError("kappa target: point " + x.to_string() + " lies outside every partition cell");
  }
  return 1;
}

std::string KappaPartition::to_string() const {
  switch (kind_) {
    case Kind::kSingletons: return "singletons";
    case Kind::kDyadic: return "dyadic:" + std::to_string(level_);
    case Kind::kExplicit: {
      std::string out;
      for (const auto& c : cells_) {
        if (!out.empty()) out += ";";
        out += c.to_string();
      }
      return out;
    }
  }
  return "";
}

TargetFunction TargetFunction::simple(SimpleFunction f) {
  TargetFunction t;
  t.kind_ = Kind::kSimple;
  t.simple_ = std::move(f);
  return t;
}

TargetFunction TargetFunction::constant(SpaceKind space, Value v) {
  return simple(SimpleFunction::constant(space, v));
}

TargetFunction TargetFunction::kappa(double kappa, KappaPartition partition, Value y0, Value y1) {
  if (!(kappa >= 0.0 && kappa < 1.0)) throw ConfigError("target.kappa: must lie in [0,1)");
  TargetFunction t;
  t.kind_ = Kind::kKappa;
  t.kappa_ = kappa;
  t.partition_ = std::move(partition);
  t.y0_ = y0;
  t.y1_ = y1;
  return t;
}

TargetFunction TargetFunction::nn_killer(Value y0, Value y1) {
  TargetFunction t;
  t.kind_ = Kind::kNnKiller;
  t.y0_ = y0;
  t.y1_ = y1;
  return t;
}

SpaceKind TargetFunction::space() const {
  switch (kind_) {
    case Kind::kSimple: return simple_->space();
    case Kind::kKappa: return partition_->space();
    case Kind::kNnKiller: return SpaceKind::kUnit;
  }
  return SpaceKind::kUnit;
}

Value TargetFunction::operator()(const Point& x) const {
  switch (kind_) {
    case Kind::kSimple:
      return (*simple_)(x);
    case Kind::kKappa:
      return kappa_bit(kappa_, partition_->index_of(x)) ? y1_ : y0_;
    case Kind::kNnKiller:
      if (!x.is_unit()) throw UsageError("nn_killer target: point " + x.to_string() + " is not in [0,1]");
      return nn_killer_in_grid(x.real()) ? y0_ : y1_;
  }
  return 0.0;
}

std::string TargetFunction::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::kSimple: out << "simple(" << simple_->cells().size() << " cells)"; break;
    case Kind::kKappa: out << "kappa(" << kappa_ << ", " << partition_->to_string() << ")"; break;
    case Kind::kNnKiller: out << "nn_killer"; break;
  }
  return out.str();
}

}  // namespace ulab
