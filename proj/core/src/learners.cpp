#include "ulab/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ulab/error.hpp"

namespace ulab {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Upper bound on doubles held by the self-adaptive tracker's pair tables.
constexpr std::uint64_t kPairBudget = 50'000'000;

void require_labels(const std::vector<Point>& xs, const std::vector<Value>& ys, const char* who) {
  if (xs.size() != ys.size()) {
    throw UsageError(std::string(who) + ": " + std::to_string(xs.size()) + " points but " +
                     std::to_string(ys.size()) + " labels");
  }
}

}  // namespace

// ---- Nearest neighbour -------------------------------------------------------

Value nn_predict(const std::vector<Point>& xs, const std::vector<Value>& ys, const Point& x) {
  require_labels(xs, ys, "nn_predict");
  if (xs.empty()) throw UsageError("nn_predict: no training data");
  if (!x.is_unit()) throw UsageError("nn_predict: nearest neighbour needs points of [0,1]");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!xs[i].is_unit()) throw UsageError("nn_predict: nearest neighbour needs points of [0,1]");
    const double d = std::fabs(x.real() - xs[i].real());
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return ys[best];
}

NearestNeighbor::NearestNeighbor(const std::vector<Point>& xs, const std::vector<Value>& ys) {
  require_labels(xs, ys, "nearest neighbour");
  if (xs.empty()) throw UsageError("nearest neighbour: no training data");
  entries_.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!xs[i].is_unit()) throw UsageError("nearest neighbour: needs points of [0,1]");
    entries_.push_back(Entry{xs[i].real(), i, ys[i]});
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.x < b.x || (a.x == b.x && a.index < b.index); });
  entries_.erase(std::unique(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.x == b.x; }),
                 entries_.end());
}

Value NearestNeighbor::operator()(const Point& x) const {
  if (!x.is_unit()) throw UsageError("nearest neighbour: needs points of [0,1]");
  const double v = x.real();
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v, [](const Entry& e, double value) { return e.x < value; });
  const std::size_t right = static_cast<std::size_t>(it - entries_.begin());
  double d = std::numeric_limits<double>::infinity();
  if (right < entries_.size()) d = std::fabs(v - entries_[right].x);
  if (right > 0) d = std::min(d, std::fabs(v - entries_[right - 1].x));
  // Rounded distances can tie beyond the immediate neighbours; scan the ties.
  const Entry* pick = nullptr;
  auto consider = [&](const Entry& e) {
    if (pick == nullptr || e.index < pick->index) pick = &e;
  };
  for (std::size_t k = right; k < entries_.size() && std::fabs(v - entries_[k].x) == d; ++k) consider(entries_[k]);
  for (std::size_t k = right; k > 0 && std::fabs(v - entries_[k - 1].x) == d; --k) consider(entries_[k - 1]);
  return pick->y;
}

// ---- Memorization -----------------------------------------------------------

Value memorize_predict(const std::vector<Point>& xs, const std::vector<Value>& ys, const Point& x, Value fallback) {
  require_labels(xs, ys, "memorize_predict");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == x) return ys[i];
  }
  return fallback;
}

Value Memorizer::operator()(const Point& x) const {
  auto it = table_.find(x);
  return it == table_.end() ? fallback_ : it->second;
}

// ---- Prefix-max ERM ---------------------------------------------------------

namespace {

std::size_t first_within(const std::vector<double>& risks, double eps) {
  const double lo = *std::min_element(risks.begin(), risks.end());
  for (std::size_t k = 0; k < risks.size(); ++k) {
    if (risks[k] <= lo + eps) return k;
  }
  return 0;
}

void check_erm_args(std::size_t count, std::size_t n, std::size_t m_hat, double eps) {
  if (count == 0) throw UsageError("erm_select: empty class");
  if (m_hat == 0 || m_hat > n) {
    throw UsageError("erm_select: need 1 <= m_hat <= n, got m_hat=" + std::to_string(m_hat) + " n=" + std::to_string(n));
  }
  if (!(eps >= 0.0)) throw UsageError("erm_select: eps must be nonnegative");
}

}  // namespace

std::size_t erm_select(const std::vector<SimpleFunction>& cls, const std::vector<Point>& xs,
                       const std::vector<Value>& ys, std::size_t m_hat, double eps, const LossSpace& space) {
  require_labels(xs, ys, "erm_select");
  check_erm_args(cls.size(), xs.size(), m_hat, eps);
  std::vector<double> risks;
  risks.reserve(cls.size());
  for (const auto& f : cls) {
    double sum = 0.0;
    double worst = 0.0;
    for (std::size_t t = 0; t < xs.size(); ++t) {
      sum += space.loss(f(xs[t]), ys[t]);
      if (t + 1 >= m_hat) worst = std::max(worst, sum / static_cast<double>(t + 1));
    }
    risks.push_back(worst);
  }
  return first_within(risks, eps);
}

std::size_t erm_select(const FunctionClass& cls, std::size_t count, const std::vector<Point>& xs,
                       const std::vector<Value>& ys, std::size_t m_hat, double eps) {
  require_labels(xs, ys, "erm_select");
  check_erm_args(count, xs.size(), m_hat, eps);
  if (count > cls.total()) throw ResourceError("erm_select: class has only " + std::to_string(cls.total()) + " members");
  const auto& space = cls.loss_space();
  std::vector<double> risks(count, 0.0);
  for (std::size_t f = 0; f < count; ++f) {
    double sum = 0.0;
    double worst = 0.0;
    for (std::size_t t = 0; t < xs.size(); ++t) {
      sum += space.loss_unchecked(cls.eval(f, xs[t]), ys[t]);
      if (t + 1 >= m_hat) worst = std::max(worst, sum / static_cast<double>(t + 1));
    }
    risks[f] = worst;
  }
  return first_within(risks, eps);
}

// ---- Self-adaptive rule -----------------------------------------------------

SelfAdaptive::SelfAdaptive(std::shared_ptr<const FunctionClass> cls, ScheduleParams schedule)
    : cls_(std::move(cls)), schedule_(std::move(schedule)) {
  if (!cls_) throw UsageError("self-adaptive rule: no function class");
  schedule_.validate(cls_->loss_space(), true);
  sup_loss_ = cls_->loss_space().sup_loss();
}

Value SelfAdaptive::eval(std::size_t idx, const Point& x) const { return cls_->eval(idx, x); }

void SelfAdaptive::fit(const std::vector<Point>& xs, const std::vector<Value>& ys) {
  if (!ys.empty()) require_labels(xs, ys, "self-adaptive rule");
  xs_ = xs;
  ys_ = ys;
  n_ = xs.size();
  pairs_.clear();
  choice_.clear();
  u_.clear();
  gamma_.clear();
  best_ = 1;
  stage_max_ = 0;
  if (n_ == 0) return;

  stage_max_ = schedule_.max_stage(n_);
  const auto& cs = cls_->schedule();
  const std::size_t k = cls_->size(stage_max_);
  u_.assign(stage_max_ + 1, 0);
  gamma_.assign(stage_max_ + 1, 0.0);
  for (std::uint64_t i = 1; i <= stage_max_; ++i) {
    u_[i] = schedule_.u(i);
    gamma_[i] = schedule_.gamma(i, sup_loss_);
  }

  std::uint64_t budget = static_cast<std::uint64_t>(k) * n_;
  for (std::size_t b = 1; b < k; ++b) {
    const std::uint64_t enter = std::max<std::uint64_t>(1, cs.first_stage_with(b + 1));
    budget += static_cast<std::uint64_t>(b) * (stage_max_ - enter + 3);
  }
  if (budget > kPairBudget) {
    throw ResourceError("self-adaptive rule: " + std::to_string(k) + " hypotheses at stage " +
                        std::to_string(stage_max_) + " need too many pair statistics; use a faster-growing u schedule");
  }

  std::vector<std::vector<Value>> values(k, std::vector<Value>(n_));
  for (std::size_t f = 0; f < k; ++f) {
    for (std::size_t t = 0; t < n_; ++t) values[f][t] = eval(f, xs_[t]);
  }
  std::vector<double> avg(n_ + 1, 0.0);
  pairs_.reserve(k * (k - 1) / 2);
  for (std::size_t b = 1; b < k; ++b) {
    const auto enter = static_cast<std::uint32_t>(std::max<std::uint64_t>(1, cs.first_stage_with(b + 1)));
    for (std::size_t a = 0; a < b; ++a) {
      Pair p{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), enter, 0, 0.0, kNegInf, {}};
      for (std::size_t t = 0; t < n_; ++t) {
        p.sum += loss(values[a][t], values[b][t]);
        avg[t + 1] = p.sum / static_cast<double>(t + 1);
      }
      p.before.assign(stage_max_ - enter + 1, 0.0);
      double suffix = kNegInf;
      std::size_t s = n_;
      for (std::uint64_t i = stage_max_; i >= enter; --i) {
        while (s >= u_[i]) {
          suffix = std::max(suffix, avg[s]);
          --s;
        }
        p.before[i - enter] = suffix;
        if (i == enter) break;
      }
      pairs_.push_back(std::move(p));
    }
  }
  best_ = stage_max_;
}

void SelfAdaptive::refresh_threshold(Pair& p) const {
  // The violation predicate after - before_i > gamma_i is monotone in i, and
  // only becomes easier as `after` grows, so the threshold can only move down.
  std::uint64_t hi = p.threshold ? p.threshold - 1 : stage_max_;
  std::uint64_t lo = p.enter;
  auto violates = [&](std::uint64_t i) {
    const double before = p.before[i - p.enter];
    return p.after > before && p.after - before > gamma_[i];
  };
  if (hi < lo || !violates(hi)) return;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (violates(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  p.threshold = static_cast<std::uint32_t>(lo);
}

void SelfAdaptive::recompute_best() {
  // Start from the current index: the pair that set it may already be pruned.
  std::uint64_t best = best_;
  for (const auto& p : pairs_) {
    if (p.threshold) best = std::min<std::uint64_t>(best, p.threshold - 1);
  }
  best_ = std::max<std::uint64_t>(1, best);
  // Pairs entering after the current index can never lower it again.
  std::erase_if(pairs_, [this](const Pair& p) { return p.enter > best_; });
}

void SelfAdaptive::observe(const Point& x) {
  xs_.push_back(x);
  if (n_ == 0) return;
  const double m = static_cast<double>(xs_.size());
  const std::size_t k = cls_->size(best_);
  scratch_.resize(k);
  for (std::size_t f = 0; f < k; ++f) scratch_[f] = eval(f, x);
  bool moved = false;
  for (auto& p : pairs_) {
    p.sum += loss(scratch_[p.a], scratch_[p.b]);
    const double avg = p.sum / m;
    if (avg > p.after) {
      p.after = avg;
      const auto before = p.threshold;
      refresh_threshold(p);
      moved = moved || p.threshold != before;
    }
  }
  if (moved) recompute_best();
}

std::size_t SelfAdaptive::selected() const {
  if (n_ == 0) return 0;
  auto it = choice_.find(best_);
  if (it != choice_.end()) return it->second;
  if (ys_.size() != n_) throw UsageError("self-adaptive rule: fit() received no labels");
  const std::vector<Point> train(xs_.begin(), xs_.begin() + static_cast<std::ptrdiff_t>(n_));
  const std::size_t pick =
      erm_select(*cls_, cls_->size(best_), train, ys_, static_cast<std::size_t>(u_[best_]), schedule_.eps(n_));
  choice_.emplace(best_, pick);
  return pick;
}

Value SelfAdaptive::predict(const Point& x) const { return eval(selected(), x); }

std::uint64_t sual_index(const std::vector<Point>& xs, std::size_t n, std::size_t m, const ScheduleParams& schedule,
                         std::shared_ptr<const FunctionClass> cls) {
  if (!(n <= m && m <= xs.size())) {
    throw UsageError("sual_index: need n <= m <= |xs|, got n=" + std::to_string(n) + " m=" + std::to_string(m));
  }
  SelfAdaptive rule(std::move(cls), schedule);
  rule.fit(std::vector<Point>(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(n)), {});
  for (std::size_t t = n; t < m; ++t) rule.observe(xs[t]);
  return rule.index();
}

// ---- Unbounded-loss rule ----------------------------------------------------

ChainResult unbounded_index_chain(const std::vector<Point>& xs, const std::vector<Value>& ys, std::uint64_t i_n,
                                  std::uint64_t k_n, const FunctionClass& cls) {
  require_labels(xs, ys, "unbounded_index_chain");
  if (xs.empty()) throw UsageError("unbounded_index_chain: no training data");
  if (i_n == 0 || k_n == 0) throw UsageError("unbounded_index_chain: i_n and k_n must be positive");
  const std::uint64_t limit = std::min<std::uint64_t>(i_n, cls.total());
  const auto& space = cls.loss_space();
  std::vector<double> train_max(limit + 1, -1.0);
  auto worst_train = [&](std::uint64_t i) {
    if (train_max[i] < 0.0) {
      double w = 0.0;
      for (std::size_t t = 0; t < xs.size(); ++t) w = std::max(w, space.loss_unchecked(cls.eval(i - 1, xs[t]), ys[t]));
      train_max[i] = w;
    }
    return train_max[i];
  };
  ChainResult r;
  r.stages.push_back(1);
  r.found.push_back(true);
  for (std::uint64_t k = 1; k <= k_n; ++k) {
    const double eps_k = std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(k, 1100)));
    const double eps_prev = k == 1 ? std::numeric_limits<double>::infinity()
                                   : std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(k - 1, 1100)));
    const std::uint64_t prev = r.stages.back();
    std::uint64_t pick = 0;
    for (std::uint64_t i = 1; i <= limit; ++i) {
      if (worst_train(i) > eps_k) continue;
      if (k > 1 && cls.sup_distance(i - 1, prev - 1) > eps_prev + eps_k) continue;
      pick = i;
      break;
    }
    r.found.push_back(pick != 0);
    r.stages.push_back(pick ? pick : prev);
  }
  return r;
}

// ---- Learners behind a common interface -------------------------------------

std::string to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::kNearestNeighbor: return "nn";
    case RuleKind::kMemorize: return "memorize";
    case RuleKind::kErm: return "erm";
    case RuleKind::kSelfAdaptive: return "sual";
    case RuleKind::kUnbounded: return "unbounded";
  }
  return "?";
}

RuleKind parse_rule_kind(const std::string& text) {
  for (auto k : {RuleKind::kNearestNeighbor, RuleKind::kMemorize, RuleKind::kErm, RuleKind::kSelfAdaptive,
                 RuleKind::kUnbounded}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError("learner.rule: unknown rule '" + text + "' (expected nn|memorize|erm|sual|unbounded)");
}

namespace {

class NnLearner final : public InductiveLearner {
 public:
  void fit(const std::vector<Point>& xs, const std::vector<Value>& ys) override { index_.emplace(xs, ys); }
  Value predict(const Point& x) const override {
    if (!index_) throw UsageError("nearest neighbour: predict before fit");
    return (*index_)(x);
  }

 private:
  std::optional<NearestNeighbor> index_;
};

class MemorizeLearner final : public InductiveLearner {
 public:
  explicit MemorizeLearner(Value fallback) : table_(fallback), fallback_(fallback) {}
  void fit(const std::vector<Point>& xs, const std::vector<Value>& ys) override {
    require_labels(xs, ys, "memorize");
    table_ = Memorizer(fallback_);
    for (std::size_t i = 0; i < xs.size(); ++i) table_.record(xs[i], ys[i]);
  }
  Value predict(const Point& x) const override { return table_(x); }

 private:
  Memorizer table_;
  Value fallback_;
};

class ErmLearner final : public InductiveLearner {
 public:
  explicit ErmLearner(RuleContext ctx) : ctx_(std::move(ctx)) {}
  void fit(const std::vector<Point>& xs, const std::vector<Value>& ys) override {
    const std::uint64_t n = xs.size();
    if (n == 0) {
      pick_ = 0;
      return;
    }
    const std::size_t count = std::min<std::size_t>(ctx_.cls->size(ctx_.schedule.i_n(n)), ctx_.cls->total());
    const std::size_t m_hat = std::min<std::uint64_t>(ctx_.schedule.m_hat(n), n);
    pick_ = erm_select(*ctx_.cls, count, xs, ys, m_hat, ctx_.schedule.eps(n));
  }
  Value predict(const Point& x) const override { return ctx_.cls->eval(pick_, x); }

 private:
  RuleContext ctx_;
  std::size_t pick_ = 0;
};

class UnboundedLearner final : public InductiveLearner {
 public:
  explicit UnboundedLearner(RuleContext ctx) : ctx_(std::move(ctx)) {}
  void fit(const std::vector<Point>& xs, const std::vector<Value>& ys) override {
    const std::uint64_t n = xs.size();
    if (n == 0) {
      pick_ = 0;
      return;
    }
    pick_ = unbounded_index_chain(xs, ys, ctx_.schedule.i_n(n), ctx_.schedule.k_n(n), *ctx_.cls).final_index() - 1;
  }
  Value predict(const Point& x) const override { return ctx_.cls->eval(pick_, x); }

 private:
  RuleContext ctx_;
  std::size_t pick_ = 0;
};

class SualInductive final : public InductiveLearner {
 public:
  explicit SualInductive(const RuleContext& ctx) : rule_(ctx.cls, ctx.schedule) {}
  void fit(const std::vector<Point>& xs, const std::vector<Value>& ys) override { rule_.fit(xs, ys); }
  Value predict(const Point& x) const override { return rule_.predict(x); }

 private:
  SelfAdaptive rule_;
};

class SualAdaptive final : public SelfAdaptiveLearner {
 public:
  explicit SualAdaptive(const RuleContext& ctx) : rule_(ctx.cls, ctx.schedule) {}
  void fit(const std::vector<Point>& xs, const std::vector<Value>& ys) override { rule_.fit(xs, ys); }
  void observe(const Point& x) override { rule_.observe(x); }
  Value predict(const Point& x) const override { return rule_.predict(x); }

 private:
  SelfAdaptive rule_;
};

// An inductive rule run under the self-adaptive protocol ignores the
// unlabeled extension.
class FrozenAdaptive final : public SelfAdaptiveLearner {
 public:
  explicit FrozenAdaptive(std::unique_ptr<InductiveLearner> inner) : inner_(std::move(inner)) {}
  void fit(const std::vector<Point>& xs, const std::vector<Value>& ys) override { inner_->fit(xs, ys); }
  void observe(const Point&) override {}
  Value predict(const Point& x) const override { return inner_->predict(x); }

 private:
  std::unique_ptr<InductiveLearner> inner_;
};

void require_class(const RuleContext& ctx, RuleKind kind) {
  if (!ctx.cls) throw ConfigError("learner.class: rule '" + to_string(kind) + "' needs a function class");
}

}  // namespace

std::unique_ptr<InductiveLearner> make_inductive(RuleKind kind, const RuleContext& ctx) {
  switch (kind) {
    case RuleKind::kNearestNeighbor: return std::make_unique<NnLearner>();
    case RuleKind::kMemorize: return std::make_unique<MemorizeLearner>(ctx.fallback);
    case RuleKind::kErm:
      require_class(ctx, kind);
      ctx.schedule.validate(ctx.space, false);
      return std::make_unique<ErmLearner>(ctx);
    case RuleKind::kUnbounded:
      require_class(ctx, kind);
      ctx.schedule.validate(ctx.space, false);
      return std::make_unique<UnboundedLearner>(ctx);
    case RuleKind::kSelfAdaptive:
      require_class(ctx, kind);
      return std::make_unique<SualInductive>(ctx);
  }
  throw ConfigError("learner.rule: unsupported rule");
}

std::unique_ptr<SelfAdaptiveLearner> make_self_adaptive(RuleKind kind, const RuleContext& ctx) {
  if (kind == RuleKind::kSelfAdaptive) {
    require_class(ctx, kind);
    return std::make_unique<SualAdaptive>(ctx);
  }
  return std::make_unique<FrozenAdaptive>(make_inductive(kind, ctx));
}

}  // namespace ulab
