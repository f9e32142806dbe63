#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ulab/function_class.hpp"
#include "ulab/loss.hpp"
#include "ulab/point.hpp"

namespace ulab {

// Integer sequence a(n) >= 1 built from a shape: linear scale*n, log2
// scale*log2(n+1), sqrt scale*sqrt(n), pow2 scale*2^(n-1), const scale.
// Values are rounded up and optionally capped.
struct IntSchedule {
  enum class Shape : std::uint8_t { kLinear, kLog2, kSqrt, kPow2, kConst };

  Shape shape = Shape::kLinear;
  double scale = 1.0;
  std::uint64_t cap = 0;  // 0: uncapped

  std::uint64_t operator()(std::uint64_t n) const;
  friend bool operator==(const IntSchedule&, const IntSchedule&) = default;
};

std::string to_string(IntSchedule::Shape shape);
IntSchedule::Shape parse_shape(const std::string& text);

// gamma_i = scale * sup_loss * ratio^(i-1).
struct GammaSchedule {
  double scale = 1.0;
  double ratio = 0.5;
  double operator()(std::uint64_t i, double sup_loss) const;
  friend bool operator==(const GammaSchedule&, const GammaSchedule&) = default;
};

// eps_n = scale / n^power.
struct EpsSchedule {
  double scale = 1.0;
  double power = 1.0;
  double operator()(std::uint64_t n) const;
  friend bool operator==(const EpsSchedule&, const EpsSchedule&) = default;
};

struct ScheduleParams {
  IntSchedule u{IntSchedule::Shape::kPow2, 1.0, 0};
  GammaSchedule gamma;
  EpsSchedule eps;
  IntSchedule m_hat{IntSchedule::Shape::kSqrt, 1.0, 0};
  IntSchedule i_n{IntSchedule::Shape::kLog2, 1.0, 0};
  IntSchedule k_n{IntSchedule::Shape::kLog2, 1.0, 0};

  // Checks u_1 = 1 and, when the self-adaptive rule is in use, gamma_1 >= sup
  // loss with gamma nonincreasing and vanishing.
  void validate(const LossSpace& space, bool self_adaptive) const;
  // max{i : u_i <= n}; 0 when n = 0.
  std::uint64_t max_stage(std::uint64_t n) const;

  friend bool operator==(const ScheduleParams&, const ScheduleParams&) = default;
};

// ---- Nearest neighbour -------------------------------------------------------

// Label of the training point closest to x, smallest index on ties.
Value nn_predict(const std::vector<Point>& xs, const std::vector<Value>& ys, const Point& x);

// Sorted index for repeated nearest-neighbour queries on [0,1]; answers match
// nn_predict exactly.
class NearestNeighbor {
 public:
  NearestNeighbor(const std::vector<Point>& xs, const std::vector<Value>& ys);
  Value operator()(const Point& x) const;

 private:
  struct Entry {
    double x;
    std::size_t index;
    Value y;
  };
  std::vector<Entry> entries_;  // one per distinct x, keeping the smallest index
};

// ---- Memorization -----------------------------------------------------------

// Label of the first training occurrence of x, else the default.
Value memorize_predict(const std::vector<Point>& xs, const std::vector<Value>& ys, const Point& x, Value fallback);

class Memorizer {
 public:
  explicit Memorizer(Value fallback = 0.0) : fallback_(fallback) {}
  // Keeps the first label seen for each point.
  void record(const Point& x, Value y) { table_.emplace(x, y); }
  Value operator()(const Point& x) const;
  bool seen(const Point& x) const { return table_.count(x) != 0; }
  std::size_t distinct() const { return table_.size(); }

 private:
  Value fallback_;
  std::unordered_map<Point, Value, PointHash> table_;
};

// ---- Prefix-max ERM ---------------------------------------------------------

// Index of the first function whose prefix-max risk over m in [m_hat, n] is
// within eps of the class minimum.
std::size_t erm_select(const std::vector<SimpleFunction>& cls, const std::vector<Point>& xs,
                       const std::vector<Value>& ys, std::size_t m_hat, double eps, const LossSpace& space);
// Same rule over the first `count` members of an enumeration, evaluated fast.
std::size_t erm_select(const FunctionClass& cls, std::size_t count, const std::vector<Point>& xs,
                       const std::vector<Value>& ys, std::size_t m_hat, double eps);

// ---- Self-adaptive rule -----------------------------------------------------

// Maintains the stability index i_{n,m} and the selected hypothesis while
// unlabeled points stream in after n labeled ones. The interface takes labels
// only through fit(), so nothing past y_n can reach the rule.
class SelfAdaptive {
 public:
  SelfAdaptive(std::shared_ptr<const FunctionClass> cls, ScheduleParams schedule);

  // Resets the state to (x_{1:n}, y_{1:n}); ys may be empty when only the index
  // is needed.
  void fit(const std::vector<Point>& xs, const std::vector<Value>& ys);
  // Appends the unlabeled point x_{m+1}.
  void observe(const Point& x);

  std::size_t n() const { return n_; }
  std::size_t m() const { return xs_.size(); }
  // i_{n,m}; 1 when n = 0.
  std::uint64_t index() const { return best_; }
  // Enumeration index of the selected hypothesis at the current (n, m).
  std::size_t selected() const;
  Value predict(const Point& x) const;
  // Pairs still able to move the index.
  std::size_t tracked_pairs() const { return pairs_.size(); }

 private:
  struct Pair {
    std::uint32_t a;
    std::uint32_t b;
    std::uint32_t enter;       // first stage whose class holds both members
    std::uint32_t threshold;   // first violating stage, or 0 when none
    double sum;                // cumulative disagreement up to m
    double after;              // max average over (n, m]; -inf before any
    std::vector<double> before;  // before[i - enter] = max average over [u_i, n]
  };

  Value eval(std::size_t idx, const Point& x) const;
  double loss(Value a, Value b) const { return cls_->loss_space().loss_unchecked(a, b); }
  void refresh_threshold(Pair& p) const;
  void recompute_best();

  std::shared_ptr<const FunctionClass> cls_;
  ScheduleParams schedule_;
  double sup_loss_ = 1.0;

  std::vector<Point> xs_;
  std::vector<Value> ys_;
  std::size_t n_ = 0;
  std::uint64_t stage_max_ = 0;
  std::uint64_t best_ = 1;
  std::vector<std::uint64_t> u_;     // u_[i] for i in [1, stage_max]
  std::vector<double> gamma_;        // gamma_[i]
  std::vector<Pair> pairs_;
  std::vector<Value> scratch_;
  mutable std::map<std::uint64_t, std::size_t> choice_;  // stage -> selected member
};

// i_{n,m} for the first m points of xs, via the tracker.
std::uint64_t sual_index(const std::vector<Point>& xs, std::size_t n, std::size_t m, const ScheduleParams& schedule,
                         std::shared_ptr<const FunctionClass> cls);

// ---- Unbounded-loss rule ----------------------------------------------------

struct ChainResult {
  // stages[k] = i_{n,k} (1-based enumeration index), stages[0] = 1.
  std::vector<std::uint64_t> stages;
  // Whether the stage-k candidate set was nonempty.
  std::vector<bool> found;
  std::uint64_t final_index() const { return stages.back(); }
};

ChainResult unbounded_index_chain(const std::vector<Point>& xs, const std::vector<Value>& ys, std::uint64_t i_n,
                                  std::uint64_t k_n, const FunctionClass& cls);

// ---- Learners behind a common interface -------------------------------------

enum class RuleKind : std::uint8_t { kNearestNeighbor, kMemorize, kErm, kSelfAdaptive, kUnbounded };
std::string to_string(RuleKind kind);
RuleKind parse_rule_kind(const std::string& text);

struct RuleContext {
  LossSpace space;
  ScheduleParams schedule;
  std::shared_ptr<const FunctionClass> cls;
  Value fallback = 0.0;  // y_0 for memorization
};

// Inductive protocol: frozen after fit().
class InductiveLearner {
 public:
  virtual ~InductiveLearner() = default;
  virtual void fit(const std::vector<Point>& xs, const std::vector<Value>& ys) = 0;
  virtual Value predict(const Point& x) const = 0;
};

// Self-adaptive protocol: fit() on n labeled points, then observe() unlabeled ones.
class SelfAdaptiveLearner {
 public:
  virtual ~SelfAdaptiveLearner() = default;
  virtual void fit(const std::vector<Point>& xs, const std::vector<Value>& ys) = 0;
  virtual void observe(const Point& x) = 0;
  virtual Value predict(const Point& x) const = 0;
};

std::unique_ptr<InductiveLearner> make_inductive(RuleKind kind, const RuleContext& ctx);
// The self-adaptive rule proper, or any inductive rule that ignores the extra points.
std::unique_ptr<SelfAdaptiveLearner> make_self_adaptive(RuleKind kind, const RuleContext& ctx);

}  // namespace ulab
