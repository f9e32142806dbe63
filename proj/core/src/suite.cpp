#include "ulab/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "ulab/config.hpp"
#include "ulab/diagnostics.hpp"
#include "ulab/empirical.hpp"
#include "ulab/error.hpp"
#include "ulab/experiment.hpp"
#include "ulab/learners.hpp"
#include "ulab/online.hpp"
#include "ulab/process.hpp"
#include "ulab/rng.hpp"
#include "ulab/target.hpp"

namespace ulab {

namespace {

// Tolerances and budgets, fixed here so every run judges the same way.
constexpr double kRegretSlack = 1e-9;
constexpr double kMuTolerance = 1e-12;
constexpr double kC1Seconds = 5.0;
constexpr double kC3Seconds = 3.0;
constexpr double kC4Seconds = 2.0;
constexpr double kC4MinLoss = 0.5;
constexpr double kC6Seconds = 30.0;
constexpr double kC6MaxLoss = 0.05;
constexpr double kC9LogGrowthMax = 2e-5;

using Clock = std::chrono::steady_clock;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- 1: exponential-weights regret ----------------------------------------

CriterionResult c1() {
  CriterionResult r;
  const auto start = Clock::now();
  constexpr int kInstances = 500;
  constexpr std::size_t kSteps = 200;
  constexpr std::size_t kExperts = 16;
  const double bs[] = {0.3, 0.5, 0.9};
  double worst = -std::numeric_limits<double>::infinity();  // max of lhs - rhs
  int failures = 0;
  int total = 0;
  for (std::size_t bi = 0; bi < 3; ++bi) {
    const double b = bs[bi];
    for (int inst = 0; inst < kInstances; ++inst) {
      CounterRng rng(1000 * (bi + 1) + static_cast<std::uint64_t>(inst), 11);
      Aggregator agg(b, Aggregator::default_prior(kExperts));
      const std::vector<double> prior = agg.prior();
      std::vector<double> cum(kExperts, 0.0);
      std::vector<double> z(kExperts);
      double mix = 0.0;
      for (std::size_t t = 0; t < kSteps; ++t) {
        const auto v = agg.weights();
        for (auto& zi : z) zi = rng.uniform();
        for (std::size_t i = 0; i < kExperts; ++i) {
          mix += v[i] * z[i];
          cum[i] += z[i];
        }
        agg.update(z);
      }
      const double lhs = mix / static_cast<double>(kSteps);
      double rhs = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < kExperts; ++i) {
        rhs = std::min(rhs, regret_bound(b, prior[i], cum[i] / static_cast<double>(kSteps), kSteps));
      }
      worst = std::max(worst, lhs - rhs);
      if (lhs > rhs + kRegretSlack) ++failures;
      ++total;
    }
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = failures == 0 && r.seconds < kC1Seconds;
  r.measured = "violations " + std::to_string(failures) + "/" + std::to_string(total) +
               ", max(lhs - bound) = " + num(worst);
  r.detail = "500 instances per b in {0.3,0.5,0.9}, n=200, 16 experts, slack 1e-9, < 5 s";
  return r;
}

// ---- 2: submeasure properties of the limsup-frequency proxy ----------------

MeasurableSet random_unit_set(CounterRng& rng) {
  const std::uint64_t den = std::uint64_t{1} << (1 + rng.below(6));
  std::vector<Interval> parts;
  const std::uint64_t pieces = rng.below(4);
  for (std::uint64_t p = 0; p < pieces; ++p) {
    std::uint64_t a = rng.below(den + 1);
    std::uint64_t b = rng.below(den + 1);
    if (a > b) std::swap(a, b);
    if (a == b) continue;
    parts.push_back({Rational(static_cast<std::int64_t>(a), static_cast<std::int64_t>(den)),
                     Rational(static_cast<std::int64_t>(b), static_cast<std::int64_t>(den))});
  }
  return MeasurableSet::from_intervals(std::move(parts));
}

MeasurableSet random_nat_set(CounterRng& rng) {
  std::vector<std::uint64_t> elems;
  const std::uint64_t count = rng.below(6);
  for (std::uint64_t i = 0; i < count; ++i) elems.push_back(rng.below(12));
  return rng.bernoulli(0.2) ? MeasurableSet::cofinite(std::move(elems)) : MeasurableSet::finite(std::move(elems));
}

CriterionResult c2() {
  CriterionResult r;
  const auto start = Clock::now();
  constexpr int kTriples = 10000;
  int bad_nonneg = 0, bad_empty = 0, bad_mono = 0, bad_sub = 0;
  double worst_sub = -std::numeric_limits<double>::infinity();
  double worst_mono = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < kTriples; ++k) {
    CounterRng rng(static_cast<std::uint64_t>(k), 21);
    const bool unit = (k % 2) == 0;
    const MeasurableSet a = unit ? random_unit_set(rng) : random_nat_set(rng);
    const MeasurableSet b = unit ? random_unit_set(rng) : random_nat_set(rng);
    const std::size_t len = 1 + rng.below(200);
    std::vector<Point> sample;
    sample.reserve(len);
    for (std::size_t t = 0; t < len; ++t) {
      if (unit) {
        sample.push_back(Point::unit(static_cast<double>(rng.below(64)) / 64.0));
      } else {
        sample.push_back(Point::natural(rng.below(14)));
      }
    }
    const std::size_t tail = default_tail_start(len);
    const SpaceKind space = unit ? SpaceKind::kUnit : SpaceKind::kNatural;
    const double ma = mu_hat_estimate(a, sample, tail);
    const double mb = mu_hat_estimate(b, sample, tail);
    const double mu = mu_hat_estimate(set_union(a, b), sample, tail);
    const double mi = mu_hat_estimate(set_intersect(a, b), sample, tail);
    const double me = mu_hat_estimate(MeasurableSet::empty(space), sample, tail);
    if (ma < 0 || mb < 0 || mu < 0) ++bad_nonneg;
    if (me != 0.0) ++bad_empty;
    // A ∩ B ⊆ A ⊆ A ∪ B.
    const double mono = std::max(mi - ma, ma - mu);
    worst_mono = std::max(worst_mono, mono);
    if (mono > kMuTolerance) ++bad_mono;
    const double sub = mu - (ma + mb);
    worst_sub = std::max(worst_sub, sub);
    if (sub > kMuTolerance) ++bad_sub;
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = bad_nonneg + bad_empty + bad_mono + bad_sub == 0;
  r.measured = "failures: nonneg " + std::to_string(bad_nonneg) + ", empty " + std::to_string(bad_empty) +
               ", monotone " + std::to_string(bad_mono) + " (worst " + num(worst_mono) + "), subadditive " +
               std::to_string(bad_sub) + " (worst " + num(worst_sub) + ")";
  r.detail = "10^4 random (A, B, sample) triples on [0,1] and the naturals, tolerance 1e-12";
  return r;
}

// ---- 3: memorization online on log_growth ---------------------------------

CriterionResult c3() {
  CriterionResult r;
  const auto start = Clock::now();
  const std::uint64_t horizon = (std::uint64_t{1} << 20) - 1;
  ProcessStream stream = make_process(ProcessKind::kLogGrowth, ProcessParams{SpaceKind::kNatural}, 1);
  OnlineMemorize learner(0.0);
  std::uint64_t mistakes = 0;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const Point x = stream.next();
    if (learner.predict(x) != 1.0) ++mistakes;
    learner.feed(1.0);
  }

  ExperimentConfig cfg;
  cfg.protocol = Protocol::kOnline;
  cfg.process.kind = ProcessKind::kLogGrowth;
  cfg.process.params.space = SpaceKind::kNatural;
  cfg.process.params.x0 = 0.0;
  cfg.process.params.x1 = 1.0;
  cfg.target.kind = TargetKind::kConstant;
  cfg.target.value = 1.0;
  cfg.online.rule = OnlineRuleKind::kMemorize;
  cfg.learner.fallback = 0.0;
  cfg.train_sizes = {horizon};
  cfg.seeds = {1};
  const ExperimentTrace trace = run_experiment(cfg);
  const double avg = trace.records.at(0).avg_loss;
  const double expected = 20.0 / static_cast<double>(horizon);

  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = mistakes == 20 && avg == expected && r.seconds < kC3Seconds;
  r.measured = "mistakes " + std::to_string(mistakes) + ", harness average " + exact(avg) + " (expected " +
               exact(expected) + ")";
  r.detail = "target = 1, default label 0, T = 2^20 - 1; exact; < 3 s";
  return r;
}

// ---- 4: nearest neighbour on the counterexample process -------------------

ExperimentConfig c4_config() {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::kInductive;
  cfg.process.kind = ProcessKind::kNnKiller;
  cfg.process.params.space = SpaceKind::kUnit;
  cfg.target.kind = TargetKind::kNnKiller;
  cfg.target.y0 = 0.0;
  cfg.target.y1 = 1.0;
  cfg.learner.rule = RuleKind::kNearestNeighbor;
  cfg.train_sizes = {30};
  cfg.eval_horizon = 3600;
  for (std::uint64_t s = 1; s <= 20; ++s) cfg.seeds.push_back(s);
  return cfg;
}

CriterionResult c4() {
  CriterionResult r;
  const auto start = Clock::now();
  const ExperimentTrace trace = run_experiment(c4_config());
  double sum = 0.0;
  double lo = 1.0;
  for (const auto& rec : trace.records) {
    sum += rec.avg_loss;
    lo = std::min(lo, rec.avg_loss);
  }
  const double mean = sum / static_cast<double>(trace.records.size());
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = mean >= kC4MinLoss && r.seconds < kC4Seconds;
  r.measured = "mean 0-1 loss " + num(mean) + " over " + std::to_string(trace.records.size()) +
               " seeds (lowest " + num(lo) + ")";
  r.detail = "n = 30, evaluation t in (30, 3630], threshold mean >= 0.5, < 2 s";
  return r;
}

// ---- 5: doubling blocks ----------------------------------------------------

CriterionResult c5() {
  CriterionResult r;
  const auto start = Clock::now();
  ProcessParams params;
  params.space = SpaceKind::kUnit;
  ProcessStream stream = make_process(ProcessKind::kDoublingBlock, params, 1);
  const Point x1 = Point::unit(params.x1);
  std::uint64_t hits = 0;
  std::uint64_t m = 0;
  std::uint64_t end = 1;
  bool ok = true;
  std::ostringstream freq;
  for (int i = 1; i <= 9; ++i) {
    end *= 3;
    while (m < end - 1) {
      if (stream.next() == x1) ++hits;
      ++m;
    }
    const bool good = (i % 2 == 1) ? 3 * hits >= 2 * m : 3 * hits <= m;
    ok = ok && good;
    freq << (i > 1 ? " " : "") << "i" << i << "=" << hits << "/" << m;
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = ok;
  r.measured = freq.str();
  r.detail = "frequency of {x1} at m = 3^i - 1: >= 2/3 for odd i, <= 1/3 for even i, integer arithmetic";
  return r;
}

// ---- 6: self-adaptive rule on a level-2 target ----------------------------

ExperimentConfig c6_config() {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::kSelfAdaptive;
  cfg.process.kind = ProcessKind::kIid;
  cfg.process.params.space = SpaceKind::kUnit;
  cfg.target.kind = TargetKind::kSimple;
  cfg.target.cells = {"[1/4,3/4)"};
  cfg.target.values = {1.0};
  cfg.target.default_value = 0.0;
  cfg.learner.rule = RuleKind::kSelfAdaptive;
  cfg.train_sizes = {50, 2000};
  cfg.eval_horizon = 1000;
  cfg.seeds = {7};
  return cfg;
}

CriterionResult c6() {
  CriterionResult r;
  const auto start = Clock::now();
  const ExperimentTrace trace = run_experiment(c6_config());
  const double w50 = trace.records.at(0).wmax_loss;
  const double w2000 = trace.records.at(1).wmax_loss;
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = w2000 <= kC6MaxLoss && w2000 <= w50 && r.seconds < kC6Seconds;
  r.measured = "wmax(50) = " + num(w50) + ", wmax(2000) = " + num(w2000) + ", avg(50) = " +
               num(trace.records[0].avg_loss) + ", avg(2000) = " + num(trace.records[1].avg_loss);
  r.detail = "iid uniform, target 1 on [1/4,3/4), seed 7, M = 1000; wmax(2000) <= 0.05 and <= wmax(50); < 30 s";
  return r;
}

// ---- 7: monotonicity of the stability index --------------------------------

CriterionResult c7() {
  CriterionResult r;
  const auto start = Clock::now();
  ClassSchedule cs;
  cs.space = SpaceKind::kUnit;
  cs.values = LossSpace(ValueKind::kBinary, LossKind::kZeroOne);
  auto cls = std::make_shared<const FunctionClass>(cs);
  const ScheduleParams schedule;
  std::vector<std::size_t> offsets;
  for (std::size_t d = 0; d <= 32; ++d) offsets.push_back(d);
  for (std::size_t d : {48, 64, 96, 128, 192, 256}) offsets.push_back(d);
  const std::size_t ns[] = {4, 16, 64};
  std::uint64_t probes = 0;
  std::uint64_t violations = 0;
  std::uint64_t moved = 0;
  for (std::uint64_t stream_id = 1; stream_id <= 50; ++stream_id) {
    ProcessParams params;
    params.space = SpaceKind::kUnit;
    const ProcessKind kind = (stream_id % 2) ? ProcessKind::kIid : ProcessKind::kDoublingBlock;
    ProcessStream stream = make_process(kind, params, stream_id);
    const std::vector<Point> xs = stream.take(64 + 256);
    for (std::size_t n : ns) {
      std::uint64_t prev = 0;
      bool first = true;
      for (std::size_t d : offsets) {
        const std::uint64_t idx = sual_index(xs, n, n + d, schedule, cls);
        ++probes;
        if (!first && idx > prev) ++violations;
        if (!first && idx < prev) ++moved;
        prev = idx;
        first = false;
      }
    }
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = violations == 0;
  r.measured = "increases " + std::to_string(violations) + " over " + std::to_string(probes) +
               " probes (strict decreases seen: " + std::to_string(moved) + ")";
  r.detail = "50 streams (iid and doubling-block), n in {4,16,64}, m - n in [0,32] and up to 256, fresh index per probe";
  return r;
}

// ---- 8: unbounded-loss rule on a finite-support process -------------------

CriterionResult c8() {
  CriterionResult r;
  const auto start = Clock::now();
  ClassSchedule cs;
  cs.space = SpaceKind::kNatural;
  cs.values = LossSpace(ValueKind::kBinary, LossKind::kZeroOne);
  auto cls = std::make_shared<const FunctionClass>(cs);
  ScheduleParams schedule;
  schedule.i_n = IntSchedule{IntSchedule::Shape::kLinear, 256.0, 4096};
  const TargetFunction target =
      TargetFunction::kappa(0.6180339887498949, KappaPartition::singletons(), 0.0, 1.0);
  const RuleContext ctx{cs.values, schedule, cls, 0.0};

  std::uint64_t cases = 0;
  std::uint64_t covered_cases = 0;
  std::uint64_t loss_after_cover = 0;
  std::uint64_t chain_violations = 0;
  std::uint64_t stages_checked = 0;
  constexpr std::size_t kEval = 500;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ProcessParams params;
    params.space = SpaceKind::kNatural;
    params.k = 10;
    ProcessStream stream = make_process(ProcessKind::kIid, params, seed);
    const std::vector<Point> all = stream.take(80 + kEval);
    for (std::size_t n : {1, 5, 10, 20, 40, 80}) {
      ++cases;
      const std::vector<Point> xs(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
      std::vector<Value> ys;
      for (const auto& x : xs) ys.push_back(target(x));

      const std::uint64_t i_n = schedule.i_n(n);
      const std::uint64_t k_n = schedule.k_n(n);
      const ChainResult chain = unbounded_index_chain(xs, ys, i_n, k_n, *cls);
      // Each realized stage against the definition, member by member.
      for (std::size_t k = 1; k < chain.stages.size(); ++k) {
        if (!chain.found[k]) continue;
        ++stages_checked;
        const std::size_t idx = chain.stages[k] - 1;
        const double eps_k = std::ldexp(1.0, -static_cast<int>(k));
        double train = 0.0;
        for (std::size_t t = 0; t < n; ++t) train = std::max(train, cs.values.loss(cls->eval(idx, xs[t]), ys[t]));
        bool ok = train <= eps_k && chain.stages[k] <= std::min<std::uint64_t>(i_n, cls->total());
        if (k > 1) {
          const double eps_prev = std::ldexp(1.0, -static_cast<int>(k - 1));
          ok = ok && cls->sup_distance(idx, chain.stages[k - 1] - 1) <= eps_prev + eps_k;
        }
        if (!ok) ++chain_violations;
      }

      bool covered = true;
      for (std::uint64_t v = 0; v < 10; ++v) {
        covered = covered && std::find(xs.begin(), xs.end(), Point::natural(v)) != xs.end();
      }
      if (!covered) continue;
      ++covered_cases;
      auto learner = make_inductive(RuleKind::kUnbounded, ctx);
      learner->fit(xs, ys);
      for (std::size_t t = 80; t < all.size(); ++t) {
        if (cs.values.loss(learner->predict(all[t]), target(all[t])) != 0.0) ++loss_after_cover;
      }
    }
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = covered_cases > 0 && loss_after_cover == 0 && chain_violations == 0;
  r.measured = "nonzero losses after cover " + std::to_string(loss_after_cover) + " (" +
               std::to_string(covered_cases) + "/" + std::to_string(cases) + " fits covered all points), chain violations " +
               std::to_string(chain_violations) + " over " + std::to_string(stages_checked) + " stages";
  r.detail = "iid uniform on {0..9}, 20 seeds, n in {1,5,10,20,40,80}, i_n = 256 n capped at 4096, 500 future points";
  return r;
}

// ---- 9: Condition 2 contrast -----------------------------------------------

CriterionResult c9() {
  CriterionResult r;
  const auto start = Clock::now();
  const std::uint64_t horizon = std::uint64_t{1} << 20;
  ProcessParams params;
  params.space = SpaceKind::kNatural;
  ProcessStream slow = make_process(ProcessKind::kLogGrowth, params, 1);
  ProcessStream fresh = make_process(ProcessKind::kFreshPoint, params, 1);
  const auto cells = CellFamily::singletons();
  const double slow_ratio = condition2_curve(slow.take(horizon), cells, {horizon}).at(0).second;
  const double fresh_ratio = condition2_curve(fresh.take(horizon), cells, {horizon}).at(0).second;
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = slow_ratio <= kC9LogGrowthMax && fresh_ratio == 1.0;
  r.measured = "log_growth ratio " + exact(slow_ratio) + " (" + num(slow_ratio * static_cast<double>(horizon)) +
               " cells), fresh_point ratio " + exact(fresh_ratio);
  r.detail = "singleton cells, T = 2^20; log_growth <= 2e-5, fresh_point = 1";
  return r;
}

// ---- 10: determinism ---------------------------------------------------------

CriterionResult c10() {
  CriterionResult r;
  const auto start = Clock::now();
  std::vector<ExperimentConfig> configs;
  configs.push_back(c4_config());
  {
    ExperimentConfig cfg = c6_config();
    cfg.train_sizes = {20, 200};
    cfg.eval_horizon = 300;
    cfg.seeds = {7, 8, 9};
    configs.push_back(cfg);
  }
  {
    ExperimentConfig cfg;
    cfg.protocol = Protocol::kOnline;
    cfg.process.kind = ProcessKind::kMarkov;
    cfg.process.params.space = SpaceKind::kNatural;
    cfg.process.params.x0 = 0.0;
    cfg.process.params.x1 = 1.0;
    cfg.target.kind = TargetKind::kKappa;
    cfg.target.kappa = 0.3;
    cfg.online.rule = OnlineRuleKind::kAggregate;
    cfg.online.aggregate.i_max = 8;
    cfg.train_sizes = {10, 100, 400};
    cfg.seeds = {3, 1, 2};
    configs.push_back(cfg);
  }
  int mismatches = 0;
  std::size_t bytes = 0;
  for (const auto& cfg : configs) {
    const std::string a = trace_csv(run_experiment(cfg, 1));
    const std::string b = trace_csv(run_experiment(cfg, 1));
    const std::string c = trace_csv(run_experiment(cfg, 2));
    if (a != b || a != c) ++mismatches;
    bytes += a.size();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = mismatches == 0;
  r.measured = std::to_string(mismatches) + " mismatching configs of " + std::to_string(configs.size()) + " (" +
               std::to_string(bytes) + " CSV bytes compared)";
  r.detail = "inductive, self-adaptive and online configs, each run twice with 1 job and once with 2";
  return r;
}

}  // namespace

std::vector<int> criterion_ids() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

std::string criterion_name(int id) {
  switch (id) {
    case 1: return "exponential-weights regret bound";
    case 2: return "limsup-frequency proxy is a submeasure";
    case 3: return "online memorization on log_growth";
    case 4: return "nearest neighbour fails on nn_killer";
    case 5: return "doubling-block frequencies oscillate";
    case 6: return "self-adaptive rule on a level-2 target";
    case 7: return "stability index nonincreasing in m";
    case 8: return "unbounded-loss rule on a finite-support process";
    case 9: return "Condition 2 contrast";
    case 10: return "byte-identical reruns";
    default: throw UsageError("no criterion C" + std::to_string(id));
  }
}

CriterionResult run_criterion(int id) {
  CriterionResult r;
  switch (id) {
    case 1: r = c1(); break;
    case 2: r = c2(); break;
    case 3: r = c3(); break;
    case 4: r = c4(); break;
    case 5: r = c5(); break;
    case 6: r = c6(); break;
    case 7: r = c7(); break;
    case 8: r = c8(); break;
    case 9: r = c9(); break;
    case 10: r = c10(); break;
    default: throw UsageError("no criterion C" + std::to_string(id));
  }
  r.id = id;
  r.name = criterion_name(id);
  return r;
}

std::vector<CriterionResult> run_suite(const std::string& filter) {
  std::vector<CriterionResult> out;
  if (filter.empty()) {
    for (int id : criterion_ids()) out.push_back(run_criterion(id));
    return out;
  }
  std::string digits = filter;
  if (!digits.empty() && (digits[0] == 'C' || digits[0] == 'c')) digits.erase(0, 1);
  int id = 0;
  try {
    std::size_t used = 0;
    id = std::stoi(digits, &used);
    if (used != digits.size()) id = 0;
  } catch (const std::exception&) {
    id = 0;
  }
  const auto ids = criterion_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw UsageError("unknown criterion '" + filter + "'");
  out.push_back(run_criterion(id));
  return out;
}

std::string format_result(const CriterionResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
  return std::string(r.passed ? "PASS" : "FAIL") + " C" + std::to_string(r.id) + " " + r.name +
         " | measured: " + r.measured + " | " + r.detail + " (" + secs + " s)";
}

}  // namespace ulab
