#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "ulab/error.hpp"
#include "ulab/process.hpp"
#include "ulab/target.hpp"

using namespace ulab;

namespace {

ProcessParams params(SpaceKind space) {
  ProcessParams p;
  p.space = space;
  if (space == SpaceKind::kNatural) {
    p.x0 = 0.0;
    p.x1 = 1.0;
  }
  return p;
}

std::size_t distinct_count(const std::vector<Point>& xs) {
  std::set<std::pair<double, std::uint64_t>> seen;
  for (const auto& x : xs) seen.insert({x.real(), x.nat()});
  return seen.size();
}

}  // namespace

TEST(Processes, LogGrowthFirstPoints) {
  auto s = make_process(ProcessKind::kLogGrowth, params(SpaceKind::kNatural), 1);
  const auto xs = s.take(4);
  EXPECT_EQ(xs[0], distinct_point(SpaceKind::kNatural, 1));
  EXPECT_EQ(xs[1], distinct_point(SpaceKind::kNatural, 2));
  EXPECT_EQ(xs[2], distinct_point(SpaceKind::kNatural, 2));
  EXPECT_EQ(xs[3], distinct_point(SpaceKind::kNatural, 3));
}

TEST(Processes, LogGrowthDistinctCountIsFloorLog2Of2T) {
  for (SpaceKind space : {SpaceKind::kNatural, SpaceKind::kUnit}) {
    auto s = make_process(ProcessKind::kLogGrowth, params(space), 1);
    std::vector<Point> xs;
    for (std::uint64_t t = 1; t <= 5000; ++t) {
      xs.push_back(s.next());
      if (t % 97 == 0 || t == 4096 || t == 4095) {
        ASSERT_EQ(distinct_count(xs), static_cast<std::size_t>(std::floor(std::log2(2.0 * t)))) << t;
      }
    }
  }
}

TEST(Processes, DoublingBlockLayout) {
  ProcessParams p = params(SpaceKind::kUnit);
  auto s = make_process(ProcessKind::kDoublingBlock, p, 1);
  const auto xs = s.take(8);
  EXPECT_EQ(xs[0], Point::unit(p.x1));
  EXPECT_EQ(xs[1], Point::unit(p.x1));
  for (int t = 2; t < 8; ++t) EXPECT_EQ(xs[t], Point::unit(p.x0)) << t;
  int hits = 0;
  for (const auto& x : xs) hits += x == Point::unit(p.x1);
  EXPECT_EQ(hits * 4, 8);  // frequency 1/4
}

TEST(Processes, DoublingBlockFrequenciesAtBlockEnds) {
  ProcessParams p = params(SpaceKind::kNatural);
  auto s = make_process(ProcessKind::kDoublingBlock, p, 9);
  std::uint64_t hits = 0, m = 0, end = 1;
  for (int i = 1; i <= 9; ++i) {
    end *= 3;
    while (m < end - 1) {
      hits += s.next() == Point::natural(1);
      ++m;
    }
    if (i % 2) {
      EXPECT_GE(3 * hits, 2 * m) << i;
    } else {
      EXPECT_LE(3 * hits, m) << i;
    }
  }
}

TEST(Processes, NnKillerBoundariesAndFirstPoints) {
  EXPECT_EQ(nn_killer_boundary(1), 1u);
  EXPECT_EQ(nn_killer_boundary(2), 3u);
  EXPECT_EQ(nn_killer_boundary(3), 30u);
  EXPECT_EQ(nn_killer_boundary(4), 3630u);
  EXPECT_EQ(nn_killer_boundary(5), kNnKillerHorizon);
  EXPECT_THROW(nn_killer_boundary(6), ResourceError);
  // n_k = n_{k-1} + k n_{k-1}^2.
  for (int k = 2; k <= 5; ++k) {
    const auto prev = nn_killer_boundary(k - 1);
    EXPECT_EQ(nn_killer_boundary(k), prev + static_cast<std::uint64_t>(k) * prev * prev);
  }
  auto s = make_process(ProcessKind::kNnKiller, params(SpaceKind::kUnit), 5);
  EXPECT_EQ(s.next(), Point::unit(0.0));
  EXPECT_EQ(s.next(), Point::unit(0.5));
}

TEST(Processes, NnKillerPointsSitInTheRightHalf) {
  auto s = make_process(ProcessKind::kNnKiller, params(SpaceKind::kUnit), 3);
  for (std::uint64_t t = 1; t <= 3630; ++t) {
    const double x = s.next().real();
    if (t == 1) continue;
    const int k = t <= 3 ? 2 : (t <= 30 ? 3 : 4);
    const bool grid_half_high = k % 2 == 0;
    const bool grid = nn_killer_is_grid_time(t);
    ASSERT_EQ(nn_killer_in_grid(x), grid) << t;
    const bool high = x >= 0.5;
    ASSERT_EQ(high, grid ? grid_half_high : !grid_half_high) << t;
  }
}

TEST(Processes, NnKillerGridTimesAreSparse) {
  std::uint64_t count = 0;
  for (std::uint64_t t = 1; t <= 3630; ++t) count += nn_killer_is_grid_time(t);
  EXPECT_LE(count, 1212u);
  EXPECT_EQ(count, 1u + 1u + 9u + 900u);
  EXPECT_THROW(nn_killer_is_grid_time(kNnKillerHorizon + 1), ResourceError);
}

TEST(Processes, ConstantRepeats) {
  ProcessParams p = params(SpaceKind::kUnit);
  p.x0 = 0.3;
  auto s = make_process(ProcessKind::kConstant, p, 1);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(s.next(), Point::unit(0.3));
}

TEST(Processes, ReplayIsDeterministic) {
  for (auto kind : all_process_kinds()) {
    ProcessParams p = params(default_space(kind));
    if (kind == ProcessKind::kNnKiller) p = params(SpaceKind::kUnit);
    auto a = make_process(kind, p, 42);
    auto b = make_process(kind, p, 42);
    const std::size_t count = 100000;
    ASSERT_EQ(a.take(count), b.take(count)) << to_string(kind);
    a.reset();
    auto c = make_process(kind, p, 42);
    ASSERT_EQ(a.take(1000), c.take(1000)) << to_string(kind);
  }
}

TEST(Processes, CopyClonesAtCursor) {
  auto a = make_process(ProcessKind::kMarkov, params(SpaceKind::kNatural), 8);
  a.take(37);
  auto b = a;
  EXPECT_EQ(b.cursor(), 37u);
  EXPECT_EQ(a.take(500), b.take(500));
}

TEST(Processes, IidSeedsDiffer) {
  auto a = make_process(ProcessKind::kIid, params(SpaceKind::kUnit), 5);
  auto b = make_process(ProcessKind::kIid, params(SpaceKind::kUnit), 6);
  bool differ = false;
  for (int i = 0; i < 100 && !differ; ++i) differ = !(a.next() == b.next());
  EXPECT_TRUE(differ);
}

TEST(Processes, IidNaturalStaysInRange) {
  ProcessParams p = params(SpaceKind::kNatural);
  p.k = 7;
  auto s = make_process(ProcessKind::kIid, p, 2);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) seen.insert(s.next().nat());
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_EQ(*seen.rbegin(), 6u);
}

TEST(Processes, FreshPointNeverRepeats) {
  for (SpaceKind space : {SpaceKind::kNatural, SpaceKind::kUnit}) {
    auto s = make_process(ProcessKind::kFreshPoint, params(space), 1);
    EXPECT_EQ(distinct_count(s.take(50000)), 50000u);
  }
}

TEST(Processes, BernoulliBlockFreshOrHome) {
  auto s = make_process(ProcessKind::kBernoulliBlock, params(SpaceKind::kNatural), 4);
  for (std::uint64_t t = 1; t <= 4096; ++t) {
    const auto x = s.next().nat();
    ASSERT_TRUE(x == 0 || x == t) << t;
  }
}

TEST(Processes, InvalidParamsAreConfigErrors) {
  ProcessParams p = params(SpaceKind::kUnit);
  EXPECT_THROW(make_process(ProcessKind::kMarkov, p, 1), ConfigError);
  p.x0 = 2.0;
  EXPECT_THROW(make_process(ProcessKind::kConstant, p, 1), ConfigError);
  EXPECT_THROW(make_process(ProcessKind::kNnKiller, params(SpaceKind::kNatural), 1), ConfigError);
  EXPECT_THROW(make_process("brownian", p, 1), ConfigError);
  ProcessParams q = params(SpaceKind::kNatural);
  q.k = 0;
  EXPECT_THROW(make_process(ProcessKind::kIid, q, 1), ConfigError);
}

TEST(Processes, ClaimsCarryReasons) {
  for (auto kind : all_process_kinds()) {
    ProcessParams p = params(default_space(kind));
    const auto c = claims_for(kind, p);
    for (const auto* claim : {&c.c1, &c.c2, &c.c3, &c.crf}) EXPECT_FALSE(claim->reason.empty()) << to_string(kind);
  }
  EXPECT_EQ(claims_for(ProcessKind::kFreshPoint, params(SpaceKind::kNatural)).c2.status, Tri::kFails);
  EXPECT_EQ(claims_for(ProcessKind::kDoublingBlock, params(SpaceKind::kUnit)).crf.status, Tri::kFails);
  EXPECT_EQ(claims_for(ProcessKind::kLogGrowth, params(SpaceKind::kNatural)).c2.status, Tri::kHolds);
}

TEST(Processes, RadicalInverseIsInjective) {
  std::set<double> seen;
  for (std::uint64_t i = 0; i < 70000; ++i) {
    const double x = distinct_point(SpaceKind::kUnit, i).real();
    ASSERT_TRUE(x >= 0.0 && x < 1.0);
    ASSERT_TRUE(seen.insert(x).second);
  }
  EXPECT_EQ(distinct_point(SpaceKind::kUnit, 1).real(), 0.5);
  EXPECT_EQ(distinct_point(SpaceKind::kUnit, 2).real(), 0.25);
}

TEST(KappaBit, Examples) {
  EXPECT_EQ(kappa_bit(0.5, 1), 1);
  EXPECT_EQ(kappa_bit(0.25, 1), 0);
  EXPECT_EQ(kappa_bit(0.25, 2), 1);
  EXPECT_EQ(kappa_bit(0.625, 1), 1);
  EXPECT_EQ(kappa_bit(0.625, 2), 0);
  EXPECT_EQ(kappa_bit(0.625, 3), 1);
}

TEST(KappaBit, MatchesFloorFormulaAndTerminates) {
  oracle::Gen gen(51);
  for (int trial = 0; trial < 2000; ++trial) {
    const int level = 1 + static_cast<int>(gen.below(20));
    const std::uint64_t j = gen.below(std::uint64_t{1} << level);
    const double kappa = std::ldexp(static_cast<double>(j), -level);
    for (int i = 1; i <= level; ++i) {
      const double a = std::floor(std::ldexp(kappa, i));
      const double b = 2.0 * std::floor(std::ldexp(kappa, i - 1));
      ASSERT_EQ(kappa_bit(kappa, static_cast<std::uint64_t>(i)), static_cast<int>(a - b));
    }
    for (int i = level + 1; i < level + 80; ++i) ASSERT_EQ(kappa_bit(kappa, static_cast<std::uint64_t>(i)), 0);
  }
  EXPECT_EQ(kappa_bit(0.5, 1'000'000), 0);
}

TEST(Targets, KappaOnSingletons) {
  const auto f = TargetFunction::kappa(0.25, KappaPartition::singletons(), 10.0, 20.0);
  EXPECT_EQ(f(Point::natural(0)), 10.0);  // A_1, bit 0
  EXPECT_EQ(f(Point::natural(1)), 20.0);  // A_2, bit 1
  const auto g = TargetFunction::kappa(0.625, KappaPartition::singletons(), 0.0, 1.0);
  EXPECT_EQ(g(Point::natural(0)), 1.0);
  EXPECT_EQ(g(Point::natural(1)), 0.0);
  EXPECT_EQ(g(Point::natural(2)), 1.0);
}

TEST(Targets, KappaOnDyadicAndExplicitCells) {
  const auto f = TargetFunction::kappa(0.625, KappaPartition::dyadic(2), 0.0, 1.0);
  EXPECT_EQ(f(Point::unit(0.1)), 1.0);
  EXPECT_EQ(f(Point::unit(0.3)), 0.0);
  EXPECT_EQ(f(Point::unit(0.6)), 1.0);
  EXPECT_EQ(f(Point::unit(1.0)), 0.0);  // A_4 holds 1
  const auto part = KappaPartition::parse("[0,1/2);[1/2,3/4)");
  const auto g = TargetFunction::kappa(0.25, part, 0.0, 1.0);
  EXPECT_EQ(g(Point::unit(0.6)), 1.0);
  EXPECT_THROW(g(Point::unit(0.9)), UsageError);
  EXPECT_THROW(KappaPartition::parse("[0,1/2);[1/4,3/4)"), ConfigError);
}

TEST(Targets, NnKillerGrid) {
  const auto f = TargetFunction::nn_killer(0.0, 1.0);
  EXPECT_EQ(f(Point::unit(0.5)), 0.0);
  EXPECT_EQ(f(Point::unit(0.0)), 0.0);
  EXPECT_EQ(f(Point::unit(0.5 + 100.0 / 1800.0)), 0.0);  // block 4 grid
  EXPECT_EQ(f(Point::unit(1.0 / 18.0)), 0.0);  // block 3 grid
  EXPECT_EQ(f(Point::unit(0.123456789123)), 1.0);
  auto s = make_process(ProcessKind::kNnKiller, params(SpaceKind::kUnit), 7);
  for (std::uint64_t t = 1; t <= 3630; ++t) {
    const Point x = s.next();
    ASSERT_EQ(f(x), nn_killer_is_grid_time(t) ? 0.0 : 1.0) << t;
  }
}
