#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ulab/error.hpp"
#include "ulab/learners.hpp"
#include "ulab/process.hpp"
#include "ulab/target.hpp"

using namespace ulab;

namespace {

ClassSchedule binary_unit(std::uint64_t growth = 4, std::uint64_t cap = 64) {
  ClassSchedule cs;
  cs.space = SpaceKind::kUnit;
  cs.values = LossSpace(ValueKind::kBinary, LossKind::kZeroOne);
  cs.growth = growth;
  cs.cap = cap;
  return cs;
}

std::vector<Point> unit_points(oracle::Gen& gen, std::size_t count) {
  std::vector<Point> xs;
  for (std::size_t i = 0; i < count; ++i) xs.push_back(gen.point(SpaceKind::kUnit));
  return xs;
}

std::vector<Value> labels_of(const SimpleFunction& f, const std::vector<Point>& xs) {
  std::vector<Value> ys;
  for (const auto& x : xs) ys.push_back(f(x));
  return ys;
}

}  // namespace

TEST(NearestNeighbour, Examples) {
  const std::vector<Point> xs{Point::unit(0.1), Point::unit(0.5), Point::unit(0.9)};
  const std::vector<Value> ys{1, 0, 1};
  EXPECT_EQ(nn_predict(xs, ys, Point::unit(0.2)), 1);
  EXPECT_EQ(nn_predict(xs, ys, Point::unit(0.45)), 0);
  EXPECT_EQ(nn_predict(xs, ys, Point::unit(0.3)), 1);  // tie: smallest index
  EXPECT_EQ(nn_predict(xs, ys, Point::unit(0.7)), 0);
  EXPECT_THROW(nn_predict({}, {}, Point::unit(0.1)), UsageError);
  EXPECT_THROW(nn_predict(xs, ys, Point::natural(1)), UsageError);
}

TEST(NearestNeighbour, DuplicatesKeepFirstLabel) {
  const std::vector<Point> xs{Point::unit(0.5), Point::unit(0.5)};
  EXPECT_EQ(nn_predict(xs, {1, 0}, Point::unit(0.5)), 1);
  EXPECT_EQ(NearestNeighbor(xs, {1, 0})(Point::unit(0.9)), 1);
}

TEST(NearestNeighbour, IndexMatchesScan) {
  oracle::Gen gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto xs = unit_points(gen, 1 + gen.below(40));
    std::vector<Value> ys;
    for (std::size_t i = 0; i < xs.size(); ++i) ys.push_back(static_cast<Value>(gen.below(5)));
    const NearestNeighbor nn(xs, ys);
    for (int q = 0; q < 200; ++q) {
      const Point x = q % 2 ? gen.point(SpaceKind::kUnit) : Point::unit(gen.uniform());
      ASSERT_EQ(nn(x), nn_predict(xs, ys, x)) << x.to_string();
    }
  }
}

TEST(Memorize, Examples) {
  const std::vector<Point> xs{Point::natural(3), Point::natural(5), Point::natural(3)};
  const std::vector<Value> ys{1, 0, 0};
  EXPECT_EQ(memorize_predict(xs, ys, Point::natural(3), 7), 1);
  EXPECT_EQ(memorize_predict(xs, ys, Point::natural(5), 7), 0);
  EXPECT_EQ(memorize_predict(xs, ys, Point::natural(4), 7), 7);
  Memorizer m(7);
  for (std::size_t i = 0; i < xs.size(); ++i) m.record(xs[i], ys[i]);
  EXPECT_EQ(m(Point::natural(3)), 1);
  EXPECT_EQ(m(Point::natural(4)), 7);
  EXPECT_EQ(m.distinct(), 2u);
}

TEST(Memorize, ZeroLossOnceSupportIsCovered) {
  ProcessParams p;
  p.space = SpaceKind::kNatural;
  p.x0 = 0;
  p.x1 = 1;
  p.k = 6;
  auto s = make_process(ProcessKind::kMarkov, p, 11);
  const auto f = TargetFunction::kappa(0.40625, KappaPartition::singletons(), 0, 1);
  Memorizer m(0);
  std::size_t covered_at = 0;
  for (std::size_t t = 1; t <= 5000; ++t) {
    const Point x = s.next();
    if (covered_at) ASSERT_EQ(m(x), f(x)) << t;
    m.record(x, f(x));
    if (!covered_at && m.distinct() == 6) covered_at = t;
  }
  EXPECT_GT(covered_at, 0u);
}

TEST(Erm, ExampleAndEpsTieBreak) {
  const LossSpace space(ValueKind::kBinary, LossKind::kZeroOne);
  const std::vector<SimpleFunction> F{SimpleFunction::constant(SpaceKind::kNatural, 0),
                                      SimpleFunction::constant(SpaceKind::kNatural, 1)};
  const std::vector<Point> xs{Point::natural(0), Point::natural(1), Point::natural(2), Point::natural(3)};
  // Prefix-max risks with m_hat = 1: constant 0 -> max(1, 1/2, 2/3, 1/2) = 1; constant 1 -> max(0, 1/2, 1/3, 1/2) = 1/2.
  const std::vector<Value> ys{1, 0, 1, 0};
  EXPECT_EQ(erm_select(F, xs, ys, 1, 0.0, space), 1u);
  // With m_hat = 2 the risks are 2/3 and 1/2; eps = 0.2 admits the first.
  EXPECT_EQ(erm_select(F, xs, ys, 2, 0.0, space), 1u);
  EXPECT_EQ(erm_select(F, xs, ys, 2, 0.2, space), 0u);
  EXPECT_THROW(erm_select(F, xs, ys, 0, 0.0, space), UsageError);
  EXPECT_THROW(erm_select(F, xs, ys, 5, 0.0, space), UsageError);
}

TEST(Erm, ClassVersionMatchesOracle) {
  oracle::Gen gen(17);
  const auto cs = binary_unit(4, 64);
  const FunctionClass cls(cs);
  const auto F = cls.prefix(64);
  for (int trial = 0; trial < 60; ++trial) {
    const auto xs = unit_points(gen, 1 + gen.below(30));
    std::vector<Value> ys;
    for (std::size_t i = 0; i < xs.size(); ++i) ys.push_back(static_cast<Value>(gen.below(2)));
    const std::size_t count = 1 + gen.below(64);
    const std::size_t m_hat = 1 + gen.below(xs.size());
    const double eps = gen.coin() ? 0.0 : gen.uniform() * 0.3;
    const std::vector<SimpleFunction> sub(F.begin(), F.begin() + static_cast<std::ptrdiff_t>(count));
    const auto expect = oracle::erm(sub, xs, ys, m_hat, eps, cs.values);
    ASSERT_EQ(erm_select(cls, count, xs, ys, m_hat, eps), expect);
    ASSERT_EQ(erm_select(sub, xs, ys, m_hat, eps, cs.values), expect);
  }
}

TEST(Schedules, ShapesAndMaxStage) {
  ScheduleParams s;
  EXPECT_EQ(s.u(1), 1u);
  EXPECT_EQ(s.u(4), 8u);
  EXPECT_EQ(s.max_stage(0), 0u);
  EXPECT_EQ(s.max_stage(1), 1u);
  EXPECT_EQ(s.max_stage(4), 3u);
  EXPECT_EQ(s.max_stage(7), 3u);
  EXPECT_EQ(s.max_stage(8), 4u);
  s.u = IntSchedule{IntSchedule::Shape::kLinear, 1.0, 0};
  EXPECT_EQ(s.max_stage(37), 37u);
  EXPECT_EQ(s.i_n(1), 1u);
  EXPECT_EQ(s.i_n(3), 2u);
  EXPECT_EQ(s.m_hat(10), 4u);
  EXPECT_DOUBLE_EQ(s.gamma(3, 1.0), 0.25);
  EXPECT_DOUBLE_EQ(s.eps(4), 0.25);
  EXPECT_EQ((IntSchedule{IntSchedule::Shape::kLinear, 256.0, 4096})(100), 4096u);
}

TEST(Schedules, ValidateCollectsProblems) {
  const LossSpace bounded(ValueKind::kBinary, LossKind::kZeroOne);
  const LossSpace unbounded(ValueKind::kNatural, LossKind::kAbsolute);
  ScheduleParams ok;
  EXPECT_NO_THROW(ok.validate(bounded, true));
  EXPECT_NO_THROW(ok.validate(unbounded, false));
  EXPECT_THROW(ok.validate(unbounded, true), ConfigError);
  ScheduleParams bad;
  bad.u = IntSchedule{IntSchedule::Shape::kLinear, 2.0, 0};
  bad.gamma.ratio = 1.0;
  bad.gamma.scale = 0.5;
  try {
    bad.validate(bounded, true);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.violations().size(), 3u);
  }
  ScheduleParams capped;
  capped.u.cap = 10;
  EXPECT_THROW(capped.validate(bounded, false), ConfigError);
}

TEST(SelfAdaptive, IndexAtMEqualsNIsMaxStage) {
  oracle::Gen gen(5);
  auto cls = std::make_shared<const FunctionClass>(binary_unit());
  const ScheduleParams s;
  const auto xs = unit_points(gen, 4);
  EXPECT_EQ(sual_index(xs, 4, 4, s, cls), 3u);
  EXPECT_EQ(sual_index(xs, 0, 0, s, cls), 1u);
  EXPECT_THROW(sual_index(xs, 3, 2, s, cls), UsageError);
}

TEST(SelfAdaptive, IndexMatchesDefinition) {
  oracle::Gen gen(23);
  for (int trial = 0; trial < 80; ++trial) {
    ClassSchedule cs = binary_unit(1 + gen.below(4), 16 + gen.below(48));
    if (trial % 3 == 0) {
      cs.values = LossSpace(ValueKind::kUnitReal, LossKind::kAbsolute);
    }
    auto cls = std::make_shared<const FunctionClass>(cs);
    ScheduleParams s;
    if (trial % 2) s.u = IntSchedule{IntSchedule::Shape::kLinear, 1.0, 0};
    s.gamma.ratio = 0.3 + 0.6 * gen.uniform();
    const std::size_t n = 1 + gen.below(trial % 2 ? 8 : 24);
    const std::size_t total = n + gen.below(24);
    std::vector<Point> xs = unit_points(gen, total);
    // Clustered extensions make violations likely.
    for (std::size_t t = n; t < total; ++t) {
      if (gen.coin(0.6)) xs[t] = Point::unit(static_cast<double>(gen.below(8)) / 64.0);
    }
    SelfAdaptive rule(cls, s);
    rule.fit(std::vector<Point>(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(n)), {});
    ASSERT_EQ(rule.index(), oracle::sual_index(xs, n, n, s, cs)) << trial;
    for (std::size_t m = n + 1; m <= total; ++m) {
      rule.observe(xs[m - 1]);
      ASSERT_EQ(rule.index(), oracle::sual_index(xs, n, m, s, cs)) << "trial " << trial << " m " << m;
    }
  }
}

TEST(SelfAdaptive, IndexIsNonincreasingInM) {
  auto cls = std::make_shared<const FunctionClass>(binary_unit(4, 512));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto stream = make_process(ProcessKind::kLogGrowth, ProcessParams{}, seed);
    const auto xs = stream.take(600);
    SelfAdaptive rule(cls, ScheduleParams{});
    rule.fit(std::vector<Point>(xs.begin(), xs.begin() + 100), {});
    std::uint64_t last = rule.index();
    for (std::size_t t = 100; t < xs.size(); ++t) {
      rule.observe(xs[t]);
      ASSERT_LE(rule.index(), last);
      last = rule.index();
    }
  }
}

TEST(SelfAdaptive, SelectionIsErmOverTheIndexedClass) {
  oracle::Gen gen(41);
  const auto cs = binary_unit(4, 64);
  auto cls = std::make_shared<const FunctionClass>(cs);
  const ScheduleParams s;
  for (int trial = 0; trial < 30; ++trial) {
    const auto xs = unit_points(gen, 20);
    std::vector<Value> ys;
    for (int i = 0; i < 20; ++i) ys.push_back(static_cast<Value>(gen.below(2)));
    SelfAdaptive rule(cls, s);
    rule.fit(xs, ys);
    const auto i = rule.index();
    EXPECT_EQ(i, 5u);  // u_5 = 16 <= 20 < 32
    const auto expect = oracle::erm(enumerate_class(cs, i), xs, ys, s.u(i), s.eps(20), cs.values);
    ASSERT_EQ(rule.selected(), expect);
    const Point probe = gen.point(SpaceKind::kUnit);
    ASSERT_EQ(rule.predict(probe), cls->eval(expect, probe));
  }
}

TEST(SelfAdaptive, RealizableTargetFitsTrainingData) {
  const auto cs = binary_unit(4, 64);
  auto cls = std::make_shared<const FunctionClass>(cs);
  oracle::Gen gen(77);
  const auto target = cls->to_simple_function(9);
  const auto xs = unit_points(gen, 64);
  const auto ys = labels_of(target, xs);
  SelfAdaptive rule(cls, ScheduleParams{});
  rule.fit(xs, ys);
  ASSERT_GE(cls->size(rule.index()), 10u);
  std::size_t mistakes = 0;
  for (std::size_t t = 0; t < xs.size(); ++t) mistakes += rule.predict(xs[t]) != ys[t];
  EXPECT_LE(mistakes, 1u);  // prefix-max risk within eps_n = 1/64
}

TEST(SelfAdaptive, IndexIgnoresLabels) {
  oracle::Gen gen(91);
  auto cls = std::make_shared<const FunctionClass>(binary_unit(4, 64));
  const auto xs = unit_points(gen, 80);
  const std::vector<Point> train(xs.begin(), xs.begin() + 30);
  std::vector<Value> y1, y2;
  for (int i = 0; i < 30; ++i) {
    y1.push_back(static_cast<Value>(gen.below(2)));
    y2.push_back(1 - y1.back());
  }
  SelfAdaptive a(cls, ScheduleParams{}), b(cls, ScheduleParams{}), c(cls, ScheduleParams{});
  a.fit(train, y1);
  b.fit(train, y2);
  c.fit(train, {});
  for (std::size_t t = 30; t < xs.size(); ++t) {
    ASSERT_EQ(a.index(), b.index());
    ASSERT_EQ(a.index(), c.index());
    a.observe(xs[t]);
    b.observe(xs[t]);
    c.observe(xs[t]);
  }
  EXPECT_THROW(c.selected(), UsageError);
}

TEST(SelfAdaptive, PredictBeforeAnyDataUsesFirstMember) {
  auto cls = std::make_shared<const FunctionClass>(binary_unit());
  SelfAdaptive rule(cls, ScheduleParams{});
  rule.fit({}, {});
  EXPECT_EQ(rule.index(), 1u);
  EXPECT_EQ(rule.selected(), 0u);
  rule.observe(Point::unit(0.3));
  EXPECT_EQ(rule.predict(Point::unit(0.3)), cls->eval(0, Point::unit(0.3)));
}

TEST(Unbounded, ChainExample) {
  ClassSchedule cs;
  cs.space = SpaceKind::kNatural;
  cs.values = LossSpace(ValueKind::kNatural, LossKind::kAbsolute);
  cs.cap = 128;
  const FunctionClass cls(cs);
  // Find a member that is a non-constant function and use it as the target.
  std::size_t target = 0;
  for (std::size_t i = 0; i < cls.total(); ++i) {
    if (cls.level(i) >= 1 && cls.cell_values(i)[0] != cls.cell_values(i)[1]) {
      target = i;
      break;
    }
  }
  ASSERT_GT(target, 0u);
  std::vector<Point> xs;
  std::vector<Value> ys;
  for (std::uint64_t k = 0; k < 10; ++k) {
    xs.push_back(Point::natural(k));
    ys.push_back(cls.eval(target, xs.back()));
  }
  const auto r = unbounded_index_chain(xs, ys, cls.total(), 6, cls);
  EXPECT_EQ(r.stages.size(), 7u);
  EXPECT_EQ(r.stages[0], 1u);
  // The target fits the data exactly, so stage 1 finds something no later than it.
  EXPECT_TRUE(r.found[1]);
  EXPECT_LE(r.stages[1], target + 1);
  EXPECT_THROW(unbounded_index_chain(xs, ys, 0, 3, cls), UsageError);
  EXPECT_THROW(unbounded_index_chain({}, {}, 4, 3, cls), UsageError);
}

TEST(Unbounded, ChainMatchesOracle) {
  oracle::Gen gen(101);
  for (int trial = 0; trial < 40; ++trial) {
    ClassSchedule cs;
    cs.space = trial % 2 ? SpaceKind::kNatural : SpaceKind::kUnit;
    cs.values = trial % 4 < 2 ? LossSpace(ValueKind::kNatural, LossKind::kAbsolute)
                              : LossSpace(ValueKind::kUnitReal, LossKind::kSquared);
    cs.cap = 24 + gen.below(40);
    const FunctionClass cls(cs);
    const auto F = cls.prefix(cls.total());
    std::vector<Point> xs;
    for (std::size_t i = 0, n = 1 + gen.below(12); i < n; ++i) xs.push_back(gen.point(cs.space, 8));
    const std::size_t pick = gen.below(cls.total());
    auto ys = labels_of(F[pick], xs);
    if (gen.coin(0.3)) ys[0] = cs.values.values() == ValueKind::kNatural ? ys[0] + 1 : 1.0 - ys[0];
    const std::uint64_t i_n = 1 + gen.below(cls.total());
    const std::uint64_t k_n = 1 + gen.below(6);
    const auto r = unbounded_index_chain(xs, ys, i_n, k_n, cls);
    const std::vector<SimpleFunction> sub(F.begin(), F.begin() + static_cast<std::ptrdiff_t>(i_n));
    ASSERT_EQ(r.stages, oracle::chain(xs, ys, sub, k_n, cs.values)) << trial;
  }
}

TEST(Rules, FactoryWiring) {
  RuleContext ctx;
  ctx.space = LossSpace(ValueKind::kBinary, LossKind::kZeroOne);
  ctx.fallback = 1;
  EXPECT_THROW(make_inductive(RuleKind::kErm, ctx), ConfigError);
  auto mem = make_inductive(RuleKind::kMemorize, ctx);
  mem->fit({Point::natural(2)}, {0});
  EXPECT_EQ(mem->predict(Point::natural(2)), 0);
  EXPECT_EQ(mem->predict(Point::natural(3)), 1);
  auto frozen = make_self_adaptive(RuleKind::kMemorize, ctx);
  frozen->fit({Point::natural(2)}, {0});
  frozen->observe(Point::natural(3));
  EXPECT_EQ(frozen->predict(Point::natural(3)), 1);
  EXPECT_EQ(parse_rule_kind("sual"), RuleKind::kSelfAdaptive);
  EXPECT_THROW(parse_rule_kind("svm"), ConfigError);
}
