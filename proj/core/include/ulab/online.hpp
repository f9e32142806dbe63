#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ulab/learners.hpp"

namespace ulab {

// Exponential-weights state: prior p_i, temperature b, and cumulative
// normalized losses (sum over past steps of z_{t,i} in [0,1]).
class Aggregator {
 public:
  Aggregator(double b, std::vector<double> prior);

  // p_i proportional to 6 / (pi^2 i^2), truncated to `count` experts.
  static std::vector<double> default_prior(std::size_t count);

  double b() const { return b_; }
  const std::vector<double>& prior() const { return prior_; }
  const std::vector<double>& cumulative() const { return cum_; }
  std::size_t size() const { return prior_.size(); }
  // Number of loss vectors absorbed so far (n - 1 at prediction time n).
  std::uint64_t steps() const { return steps_; }

  // v_{n,i} = w_{n,i} / sum_j w_{n,j} with w_{n,i} = p_i b^{cum_i}; computed in
  // log space. NumericError when every weight is zero.
  std::vector<double> weights() const;
  // Absorbs one vector of normalized losses, each in [0,1].
  void update(const std::vector<double>& losses);

 private:
  double b_;
  std::vector<double> prior_;
  std::vector<double> cum_;
  std::uint64_t steps_ = 0;
};

inline std::vector<double> aggregate_weights(const Aggregator& a) { return a.weights(); }

// First candidate whose weighted loss sum_i v_i loss(y, pred_i) is within eps
// of the best candidate. Finite value spaces scan every label; [0,1] scans
// k/1024 for k = 0..1024, then the expert predictions, then (squared loss) the
// weighted mean.
Value aggregate_predict(const std::vector<double>& v, const std::vector<Value>& preds, const LossSpace& space,
                        double eps);
std::vector<Value> aggregate_candidates(const std::vector<double>& v, const std::vector<Value>& preds,
                                        const LossSpace& space);

// ln(1/b)/(1-b) * L + ln(1/p)/((1-b) n), L the average normalized loss.
double regret_bound(double b, double p, double avg_loss, std::uint64_t n);

// ---- Online protocol --------------------------------------------------------

// predict(x_{t+1}) then feed(y_{t+1}), strictly alternating.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;
  Value predict(const Point& x);
  void feed(Value y);
  std::uint64_t steps() const { return steps_; }

 protected:
  virtual Value do_predict(const Point& x) = 0;
  virtual void do_feed(const Point& x, Value y) = 0;

 private:
  bool pending_ = false;
  Point pending_x_;
  std::uint64_t steps_ = 0;
};

class OnlineMemorize final : public OnlineLearner {
 public:
  explicit OnlineMemorize(Value fallback) : table_(fallback) {}

 protected:
  Value do_predict(const Point& x) override { return table_(x); }
  void do_feed(const Point& x, Value y) override { table_.record(x, y); }

 private:
  Memorizer table_;
};

// Expert in the aggregator's bank: sees each (x, y) after the fact.
class Expert {
 public:
  virtual ~Expert() = default;
  virtual Value predict(const Point& x) const = 0;
  virtual void update(const Point& x, Value y) = 0;
};

// Online rule built from the self-adaptive rule: y_0 until i labels have been
// seen, then the self-adaptive rule trained on the first i labels and adapting
// to every later point.
std::unique_ptr<Expert> expert_wrapper(std::uint64_t i, const RuleContext& ctx);
std::unique_ptr<Expert> constant_expert(Value v);
std::unique_ptr<Expert> memorize_expert(Value fallback);

enum class ExpertKind : std::uint8_t { kWrapper, kMemorize, kConstant };
std::string to_string(ExpertKind kind);
ExpertKind parse_expert_kind(const std::string& text);

struct AggregateOptions {
  double b = 0.5;
  std::size_t i_max = 64;
  double eps = 0.0;
  ExpertKind expert = ExpertKind::kWrapper;

  friend bool operator==(const AggregateOptions&, const AggregateOptions&) = default;
};

// Exponential weights over a bank of experts with the non-randomized
// prediction rule.
class OnlineAggregate final : public OnlineLearner {
 public:
  OnlineAggregate(const AggregateOptions& opts, const RuleContext& ctx);
  OnlineAggregate(double b, std::vector<std::unique_ptr<Expert>> experts, const LossSpace& space, double eps);

  const Aggregator& state() const { return agg_; }
  // Weighted normalized expert loss sum_i v_i z_i of the last completed step.
  double last_mixture_loss() const { return last_mix_; }

 protected:
  Value do_predict(const Point& x) override;
  void do_feed(const Point& x, Value y) override;

 private:
  Aggregator agg_;
  std::vector<std::unique_ptr<Expert>> experts_;
  LossSpace space_;
  double sup_loss_;
  double eps_;
  std::vector<Value> preds_;
  std::vector<double> v_;
  double last_mix_ = 0.0;
};

enum class OnlineRuleKind : std::uint8_t { kMemorize, kAggregate };
std::string to_string(OnlineRuleKind kind);
OnlineRuleKind parse_online_rule(const std::string& text);

std::unique_ptr<OnlineLearner> make_online(OnlineRuleKind kind, const AggregateOptions& opts, const RuleContext& ctx);

}  // namespace ulab
