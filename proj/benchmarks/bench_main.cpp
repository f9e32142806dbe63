#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "ulab/function_class.hpp"
#include "ulab/learners.hpp"
#include "ulab/measurable_set.hpp"
#include "ulab/online.hpp"
#include "ulab/process.hpp"

using namespace ulab;

namespace {

MeasurableSet random_set(std::mt19937_64& rng, int pieces) {
  std::uniform_int_distribution<std::int64_t> d(0, 1024);
  std::vector<Interval> parts;
  for (int i = 0; i < pieces; ++i) {
    auto a = d(rng), b = d(rng);
    if (a > b) std::swap(a, b);
    parts.push_back({Rational(a, 1024), Rational(b, 1024)});
  }
  return MeasurableSet::from_intervals(std::move(parts));
}

// Points of [0,1] from the given process.
std::vector<Point> sample(ProcessKind kind, std::size_t count) {
  return make_process(kind, ProcessParams{}, 1).take(count);
}

void BM_SetUnion(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto a = random_set(rng, static_cast<int>(state.range(0)));
  const auto b = random_set(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(set_union(a, b));
}
BENCHMARK(BM_SetUnion)->Arg(4)->Arg(64);

void BM_SetIntersect(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto a = random_set(rng, static_cast<int>(state.range(0)));
  const auto b = random_set(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(set_intersect(a, b));
}
BENCHMARK(BM_SetIntersect)->Arg(4)->Arg(64);

void BM_SetContains(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto a = random_set(rng, 64);
  std::uniform_real_distribution<double> u;
  for (auto _ : state) benchmark::DoNotOptimize(a.contains(Point::unit(u(rng))));
}
BENCHMARK(BM_SetContains);

void BM_ClassEval(benchmark::State& state) {
  ClassSchedule cs;
  cs.cap = 4096;
  const FunctionClass cls(cs);
  const auto xs = sample(ProcessKind::kIid, 1024);
  std::size_t f = 0, t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cls.eval(f, xs[t]));
    f = (f + 97) % cls.total();
    t = (t + 1) % xs.size();
  }
}
BENCHMARK(BM_ClassEval);

void BM_SimpleFunctionEval(benchmark::State& state) {
  ClassSchedule cs;
  cs.cap = 4096;
  const FunctionClass cls(cs);
  const auto f = cls.to_simple_function(cls.total() - 1);
  const auto xs = sample(ProcessKind::kIid, 1024);
  std::size_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f(xs[t]));
    t = (t + 1) % xs.size();
  }
}
BENCHMARK(BM_SimpleFunctionEval);

void BM_SelfAdaptiveTracker(benchmark::State& state) {
  ClassSchedule cs;
  cs.cap = 4096;
  auto cls = std::make_shared<const FunctionClass>(cs);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto xs = sample(ProcessKind::kLogGrowth, 2 * n);
  for (auto _ : state) {
    SelfAdaptive rule(cls, ScheduleParams{});
    rule.fit(std::vector<Point>(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(n)), {});
    for (std::size_t t = n; t < xs.size(); ++t) rule.observe(xs[t]);
    benchmark::DoNotOptimize(rule.index());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_SelfAdaptiveTracker)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_AggregatorStep(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  Aggregator agg(0.5, Aggregator::default_prior(k));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u;
  std::vector<double> z(k);
  std::vector<Value> preds(k);
  const LossSpace space(ValueKind::kBinary, LossKind::kZeroOne);
  for (auto _ : state) {
    for (std::size_t i = 0; i < k; ++i) {
      z[i] = u(rng);
      preds[i] = z[i] < 0.5 ? 0.0 : 1.0;
    }
    const auto v = agg.weights();
    benchmark::DoNotOptimize(aggregate_predict(v, preds, space, 0.0));
    agg.update(z);
  }
}
BENCHMARK(BM_AggregatorStep)->Arg(16)->Arg(64);

void BM_NearestNeighbor(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto xs = sample(ProcessKind::kIid, n);
  std::vector<Value> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = static_cast<Value>(i % 2);
  const NearestNeighbor nn(xs, ys);
  const auto queries = sample(ProcessKind::kNnKiller, 4096);
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nn(queries[q]));
    q = (q + 1) % queries.size();
  }
}
BENCHMARK(BM_NearestNeighbor)->Arg(1 << 10)->Arg(1 << 16);

void BM_ProcessStream(benchmark::State& state) {
  auto s = make_process(ProcessKind::kNnKiller, ProcessParams{}, 1);
  for (auto _ : state) {
    if (s.cursor() >= kNnKillerHorizon) s.reset();
    benchmark::DoNotOptimize(s.next());
  }
}
BENCHMARK(BM_ProcessStream);

}  // namespace

BENCHMARK_MAIN();
