#include "ulab/online.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ulab/error.hpp"

namespace ulab {

Aggregator::Aggregator(double b, std::vector<double> prior) : b_(b), prior_(std::move(prior)) {
  if (!(b_ > 0.0 && b_ < 1.0)) throw ConfigError("online.b: must lie in (0,1)");
  if (prior_.empty()) throw ConfigError("online.i_max: need at least one expert");
  double total = 0.0;
  for (double p : prior_) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("aggregator: prior weights must be positive");
    total += p;
  }
  for (double& p : prior_) p /= total;
  cum_.assign(prior_.size(), 0.0);
}

std::vector<double> Aggregator::default_prior(std::size_t count) {
  std::vector<double> p(count);
  const double c = 6.0 / (std::numbers::pi * std::numbers::pi);
  for (std::size_t i = 0; i < count; ++i) {
    const double k = static_cast<double>(i + 1);
    p[i] = c / (k * k);
  }
  return p;
}

std::vector<double> Aggregator::weights() const {
  const double lb = std::log(b_);
  std::vector<double> logw(prior_.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < prior_.size(); ++i) {
    logw[i] = std::log(prior_[i]) + cum_[i] * lb;
    top = std::max(top, logw[i]);
  }
  if (!std::isfinite(top)) throw NumericError("aggregator: every expert weight underflowed");
  double total = 0.0;
  for (double& w : logw) {
    w = std::exp(w - top);
    total += w;
  }
  for (double& w : logw) w /= total;
  return logw;
}

void Aggregator::update(const std::vector<double>& losses) {
  if (losses.size() != prior_.size()) throw UsageError("aggregator: loss vector has the wrong length");
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (!(losses[i] >= 0.0 && losses[i] <= 1.0)) {
      throw NumericError("aggregator: normalized loss " + std::to_string(losses[i]) + " outside [0,1]");
    }
    cum_[i] += losses[i];
  }
  ++steps_;
}

std::vector<Value> aggregate_candidates(const std::vector<double>& v, const std::vector<Value>& preds,
                                        const LossSpace& space) {
  if (space.finite_values()) return space.finite_value_list();
  std::vector<Value> out;
  if (space.values() == ValueKind::kUnitReal) {
    for (int k = 0; k <= 1024; ++k) out.push_back(static_cast<double>(k) / 1024.0);
  }
  out.insert(out.end(), preds.begin(), preds.end());
  if (space.kind() == LossKind::kSquared) {
    double mean = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) mean += v[i] * preds[i];
    if (space.values() == ValueKind::kNatural) mean = std::round(mean);
    out.push_back(std::clamp(mean, 0.0, space.values() == ValueKind::kUnitReal ? 1.0 : mean));
  }
  return out;
}

Value aggregate_predict(const std::vector<double>& v, const std::vector<Value>& preds, const LossSpace& space,
                        double eps) {
  if (v.size() != preds.size() || v.empty()) throw UsageError("aggregate_predict: weights and predictions differ in length");
  const auto candidates = aggregate_candidates(v, preds, space);
  std::vector<double> objective(candidates.size(), 0.0);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (std::size_t i = 0; i < v.size(); ++i) objective[c] += v[i] * space.loss_unchecked(candidates[c], preds[i]);
  }
  const double best = *std::min_element(objective.begin(), objective.end());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (objective[c] <= best + eps) return candidates[c];
  }
  return candidates.front();
}

double regret_bound(double b, double p, double avg_loss, std::uint64_t n) {
  if (!(b > 0.0 && b < 1.0)) throw UsageError("regret_bound: b must lie in (0,1)");
  if (!(p > 0.0 && p <= 1.0)) throw UsageError("regret_bound: p must lie in (0,1]");
  if (n == 0) throw UsageError("regret_bound: n must be positive");
  return std::log(1.0 / b) / (1.0 - b) * avg_loss + std::log(1.0 / p) / ((1.0 - b) * static_cast<double>(n));
}

// ---- Online protocol --------------------------------------------------------

Value OnlineLearner::predict(const Point& x) {
  if (pending_) throw ProtocolError("online rule: predict called twice without feed");
  const Value y = do_predict(x);
  pending_ = true;
  pending_x_ = x;
  return y;
}

void OnlineLearner::feed(Value y) {
  if (!pending_) throw ProtocolError("online rule: feed called without a pending prediction");
  pending_ = false;
  do_feed(pending_x_, y);
  ++steps_;
}

namespace {

class WrapperExpert final : public Expert {
 public:
  WrapperExpert(std::uint64_t i, const RuleContext& ctx) : i_(i), fallback_(ctx.fallback), rule_(ctx.cls, ctx.schedule) {}

  Value predict(const Point& x) const override { return n_ < i_ ? fallback_ : rule_.predict(x); }

  void update(const Point& x, Value y) override {
    ++n_;
    if (n_ < i_) {
      xs_.push_back(x);
      ys_.push_back(y);
    } else if (n_ == i_) {
      xs_.push_back(x);
      ys_.push_back(y);
      rule_.fit(xs_, ys_);
      xs_.clear();
      ys_.clear();
    } else {
      rule_.observe(x);  // labels past y_i never reach the rule
    }
  }

 private:
  std::uint64_t i_;
  Value fallback_;
  std::uint64_t n_ = 0;
  std::vector<Point> xs_;
  std::vector<Value> ys_;
  SelfAdaptive rule_;
};

class ConstantExpert final : public Expert {
 public:
  explicit ConstantExpert(Value v) : v_(v) {}
  Value predict(const Point&) const override { return v_; }
  void update(const Point&, Value) override {}

 private:
  Value v_;
};

class MemorizeExpert final : public Expert {
 public:
  explicit MemorizeExpert(Value fallback) : table_(fallback) {}
  Value predict(const Point& x) const override { return table_(x); }
  void update(const Point& x, Value y) override { table_.record(x, y); }

 private:
  Memorizer table_;
};

}  // namespace

std::unique_ptr<Expert> expert_wrapper(std::uint64_t i, const RuleContext& ctx) {
  if (i == 0) throw ConfigError("expert_wrapper: i must be positive");
  if (!ctx.cls) throw ConfigError("expert_wrapper: needs a function class");
  return std::make_unique<WrapperExpert>(i, ctx);
}

std::unique_ptr<Expert> constant_expert(Value v) { return std::make_unique<ConstantExpert>(v); }
std::unique_ptr<Expert> memorize_expert(Value fallback) { return std::make_unique<MemorizeExpert>(fallback); }

std::string to_string(ExpertKind kind) {
  switch (kind) {
    case ExpertKind::kWrapper: return "wrapper";
    case ExpertKind::kMemorize: return "memorize";
    case ExpertKind::kConstant: return "constant";
  }
  return "?";
}

ExpertKind parse_expert_kind(const std::string& text) {
  for (auto k : {ExpertKind::kWrapper, ExpertKind::kMemorize, ExpertKind::kConstant}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError("online.expert: unknown expert '" + text + "' (expected wrapper|memorize|constant)");
}

OnlineAggregate::OnlineAggregate(double b, std::vector<std::unique_ptr<Expert>> experts, const LossSpace& space,
                                 double eps)
    : agg_(b, Aggregator::default_prior(experts.size())),
      experts_(std::move(experts)),
      space_(space),
      sup_loss_(space.sup_loss()),
      eps_(eps) {
  if (!std::isfinite(sup_loss_) || !(sup_loss_ > 0.0)) {
    throw ConfigError("online.rule: aggregation needs a bounded loss with positive sup");
  }
  if (!(eps_ >= 0.0)) throw ConfigError("online.eps: must be nonnegative");
}

namespace {

std::vector<std::unique_ptr<Expert>> build_bank(const AggregateOptions& opts, const RuleContext& ctx) {
  if (opts.i_max == 0) throw ConfigError("online.i_max: must be positive");
  std::vector<std::unique_ptr<Expert>> bank;
  std::vector<Value> grid;
  if (opts.expert != ExpertKind::kWrapper) grid = dense_grid(ctx.space, opts.i_max);
  for (std::size_t i = 1; i <= opts.i_max; ++i) {
    switch (opts.expert) {
      case ExpertKind::kWrapper: bank.push_back(expert_wrapper(i, ctx)); break;
      case ExpertKind::kConstant: bank.push_back(constant_expert(grid[(i - 1) % grid.size()])); break;
      case ExpertKind::kMemorize: bank.push_back(memorize_expert(grid[(i - 1) % grid.size()])); break;
    }
  }
  return bank;
}

}  // namespace

OnlineAggregate::OnlineAggregate(const AggregateOptions& opts, const RuleContext& ctx)
    : OnlineAggregate(opts.b, build_bank(opts, ctx), ctx.space, opts.eps) {}

Value OnlineAggregate::do_predict(const Point& x) {
  preds_.resize(experts_.size());
  for (std::size_t i = 0; i < experts_.size(); ++i) preds_[i] = experts_[i]->predict(x);
  v_ = agg_.weights();
  return aggregate_predict(v_, preds_, space_, eps_);
}

void OnlineAggregate::do_feed(const Point& x, Value y) {
  std::vector<double> z(experts_.size());
  last_mix_ = 0.0;
  for (std::size_t i = 0; i < experts_.size(); ++i) {
    z[i] = std::min(1.0, space_.loss(preds_[i], y) / sup_loss_);
    last_mix_ += v_[i] * z[i];
  }
  agg_.update(z);
  for (auto& e : experts_) e->update(x, y);
}

std::string to_string(OnlineRuleKind kind) { return kind == OnlineRuleKind::kMemorize ? "memorize" : "aggregate"; }

OnlineRuleKind parse_online_rule(const std::string& text) {
  if (text == "memorize") return OnlineRuleKind::kMemorize;
  if (text == "aggregate") return OnlineRuleKind::kAggregate;
  throw ConfigError("online.rule: unknown rule '" + text + "' (expected memorize|aggregate)");
}

std::unique_ptr<OnlineLearner> make_online(OnlineRuleKind kind, const AggregateOptions& opts, const RuleContext& ctx) {
  if (kind == OnlineRuleKind::kMemorize) return std::make_unique<OnlineMemorize>(ctx.fallback);
  return std::make_unique<OnlineAggregate>(opts, ctx);
}

}  // namespace ulab
