#pragma once

// Brute-force reference implementations and random generators for tests. The
// oracles evaluate definitions directly, with no caching or clever indexing.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <vector>

#include "ulab/empirical.hpp"
#include "ulab/function_class.hpp"
#include "ulab/learners.hpp"
#include "ulab/measurable_set.hpp"
#include "ulab/simple_function.hpp"

namespace oracle {

using namespace ulab;

// ---- generators ---------------------------------------------------------------

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t k) { return std::uniform_int_distribution<std::uint64_t>(0, k - 1)(rng_); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  bool coin(double p = 0.5) { return uniform() < p; }

  // Finite union of intervals with endpoints on the 1/den grid, den a power of two.
  MeasurableSet unit_set(std::uint64_t max_den = 64) {
    std::uint64_t den = 2;
    while (den < max_den && coin()) den *= 2;
    std::vector<Interval> parts;
    const std::uint64_t pieces = below(4);
    for (std::uint64_t p = 0; p < pieces; ++p) {
      std::uint64_t a = below(den + 1);
      std::uint64_t b = below(den + 1);
      if (a > b) std::swap(a, b);
      if (a == b) continue;
      parts.push_back({Rational(static_cast<std::int64_t>(a), static_cast<std::int64_t>(den)),
                       Rational(static_cast<std::int64_t>(b), static_cast<std::int64_t>(den))});
    }
    return MeasurableSet::from_intervals(std::move(parts));
  }

  MeasurableSet nat_set(std::uint64_t range = 12) {
    std::vector<std::uint64_t> elems;
    const std::uint64_t count = below(6);
    for (std::uint64_t i = 0; i < count; ++i) elems.push_back(below(range));
    return coin(0.25) ? MeasurableSet::cofinite(std::move(elems)) : MeasurableSet::finite(std::move(elems));
  }

  MeasurableSet set(SpaceKind space) { return space == SpaceKind::kUnit ? unit_set() : nat_set(); }

  // Dyadic sample points, so they sit exactly on interesting endpoints too.
  Point point(SpaceKind space, std::uint64_t nat_range = 16) {
    if (space == SpaceKind::kNatural) return Point::natural(below(nat_range));
    return Point::unit(static_cast<double>(below(257)) / 256.0);
  }

  // Partition of X into up to k cells, built from random cut points.
  Partition unit_partition(std::uint64_t k) {
    std::vector<std::uint64_t> cuts{0, 64};
    for (std::uint64_t i = 1; i < k; ++i) cuts.push_back(1 + below(63));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    Partition p;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      p.push_back(MeasurableSet::interval(Rational(static_cast<std::int64_t>(cuts[i]), 64),
                                          Rational(static_cast<std::int64_t>(cuts[i + 1]), 64)));
    }
    return p;
  }

  SimpleFunction simple_function(SpaceKind space, const std::vector<Value>& values) {
    std::vector<MeasurableSet> cells;
    std::vector<Value> vals;
    MeasurableSet used = MeasurableSet::empty(space);
    const std::uint64_t count = below(4);
    for (std::uint64_t i = 0; i < count; ++i) {
      MeasurableSet c = set_difference(set(space), used);
      if (c.is_empty()) continue;
      used = set_union(used, c);
      cells.push_back(c);
      vals.push_back(values[below(values.size())]);
    }
    const Value fallback = values[below(values.size())];
    if (cells.empty()) return SimpleFunction::constant(space, fallback);  // no cell to carry the space
    return SimpleFunction(std::move(cells), std::move(vals), fallback);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Points that meet every cell of any set built from 1/2^12-grid intervals, and
// every natural below `nat_range`.
inline std::vector<Point> probe_points(SpaceKind space, std::uint64_t nat_range = 64) {
  std::vector<Point> out;
  if (space == SpaceKind::kNatural) {
    for (std::uint64_t k = 0; k < nat_range; ++k) out.push_back(Point::natural(k));
    return out;
  }
  for (std::uint64_t k = 0; k < 4096; ++k) out.push_back(Point::unit((2.0 * static_cast<double>(k) + 1.0) / 8192.0));
  for (std::uint64_t k = 0; k <= 4096; ++k) out.push_back(Point::unit(static_cast<double>(k) / 4096.0));
  return out;
}

// Membership straight from the interval list / element list.
inline bool naive_contains(const MeasurableSet& a, const Point& x) {
  if (a.space() == SpaceKind::kUnit) {
    for (const auto& iv : a.intervals()) {
      const double lo = iv.lo.to_double();
      const double hi = iv.hi.to_double();
      if (x.real() >= lo && (x.real() < hi || (hi == 1.0 && x.real() == 1.0))) return true;
    }
    return false;
  }
  const auto& e = a.elements();
  const bool listed = std::find(e.begin(), e.end(), x.nat()) != e.end();
  return a.form() == MeasurableSet::Form::kFinite ? listed : !listed;
}

// ---- empirical statistics ---------------------------------------------------

inline double prefix_average(const std::vector<double>& losses, std::size_t m) {
  double s = 0.0;
  for (std::size_t t = 0; t < m; ++t) s += losses[t];
  return s / static_cast<double>(m);
}

inline double prefix_max(const std::vector<double>& losses, std::size_t m0, std::size_t n) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t m = m0; m <= n; ++m) best = std::max(best, prefix_average(losses, m));
  return best;
}

inline double mu_hat(const MeasurableSet& a, const std::vector<Point>& sample, std::size_t tail) {
  double best = 0.0;
  for (std::size_t m = tail; m <= sample.size(); ++m) {
    std::size_t hits = 0;
    for (std::size_t t = 0; t < m; ++t) hits += naive_contains(a, sample[t]) ? 1 : 0;
    best = std::max(best, static_cast<double>(hits) / static_cast<double>(m));
  }
  return best;
}

inline double gap(const SimpleFunction& f, const SimpleFunction& g, const std::vector<Point>& sample, std::size_t u,
                  std::size_t n, std::size_t m, const LossSpace& space) {
  std::vector<double> d;
  for (std::size_t t = 0; t < m; ++t) d.push_back(space.loss(f(sample[t]), g(sample[t])));
  return std::max(0.0, prefix_max(d, u, m) - prefix_max(d, u, n));
}

// ---- learning rules --------------------------------------------------------

// max{i : u_i <= n and every pair of F_i has gap <= gamma_i}, by definition.
inline std::uint64_t sual_index(const std::vector<Point>& xs, std::size_t n, std::size_t m,
                                const ScheduleParams& s, const ClassSchedule& cs) {
  const LossSpace& space = cs.values;
  std::uint64_t best = 1;
  for (std::uint64_t i = 1; s.u(i) <= n; ++i) {
    const auto F = enumerate_class(cs, i);
    bool ok = true;
    for (std::size_t a = 0; a < F.size() && ok; ++a) {
      for (std::size_t b = 0; b < F.size() && ok; ++b) {
        if (a != b && gap(F[a], F[b], xs, s.u(i), n, m, space) > s.gamma(i, space.sup_loss())) ok = false;
      }
    }
    if (ok) best = i;
  }
  return best;
}

inline std::size_t erm(const std::vector<SimpleFunction>& F, const std::vector<Point>& xs,
                       const std::vector<Value>& ys, std::size_t m_hat, double eps, const LossSpace& space) {
  std::vector<double> risk;
  for (const auto& f : F) {
    std::vector<double> l;
    for (std::size_t t = 0; t < xs.size(); ++t) l.push_back(space.loss(f(xs[t]), ys[t]));
    risk.push_back(prefix_max(l, m_hat, xs.size()));
  }
  const double lo = *std::min_element(risk.begin(), risk.end());
  for (std::size_t k = 0; k < risk.size(); ++k) {
    if (risk[k] <= lo + eps) return k;
  }
  return 0;
}

inline double sup_distance(const SimpleFunction& f, const SimpleFunction& g, const LossSpace& space) {
  double best = 0.0;
  for (const auto& x : probe_points(f.space())) best = std::max(best, space.loss(f(x), g(x)));
  return best;
}

// The stage sequence i_{n,0..k_n} of the unbounded-loss rule, by definition.
inline std::vector<std::uint64_t> chain(const std::vector<Point>& xs, const std::vector<Value>& ys,
                                        const std::vector<SimpleFunction>& F, std::uint64_t k_n,
                                        const LossSpace& space) {
  std::vector<std::uint64_t> out{1};
  for (std::uint64_t k = 1; k <= k_n; ++k) {
    const double eps_k = std::ldexp(1.0, -static_cast<int>(k));
    const double eps_prev = k == 1 ? std::numeric_limits<double>::infinity() : std::ldexp(1.0, -static_cast<int>(k - 1));
    std::uint64_t pick = out.back();
    for (std::uint64_t i = 1; i <= F.size(); ++i) {
      double train = 0.0;
      for (std::size_t t = 0; t < xs.size(); ++t) train = std::max(train, space.loss(F[i - 1](xs[t]), ys[t]));
      if (train > eps_k) continue;
      if (k > 1 && sup_distance(F[i - 1], F[out.back() - 1], space) > eps_prev + eps_k) continue;
      pick = i;
      break;
    }
    out.push_back(pick);
  }
  return out;
}

}  // namespace oracle
