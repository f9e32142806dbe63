#pragma once

#include <cstddef>
#include <vector>

#include "ulab/loss.hpp"
#include "ulab/measurable_set.hpp"
#include "ulab/simple_function.hpp"

namespace ulab {

// Running sums of a nonnegative loss sequence. sum(m) is the total of the
// first m losses, so the empirical risk of a prefix is sum(m) / m.
class PrefixLossSeries {
 public:
  PrefixLossSeries() = default;
  explicit PrefixLossSeries(const std::vector<double>& losses);

  void push(double loss);
  std::size_t size() const { return cum_.size() - 1; }
  double sum(std::size_t m) const { return cum_.at(m); }
  double average(std::size_t m) const;

 private:
  std::vector<double> cum_{0.0};
};

// max over m in [m0, n] of sum(m) / m.
double prefix_max_risk(const PrefixLossSeries& series, std::size_t m0, std::size_t n);

// Finite-horizon stand-in for the limsup frequency of A along the sample:
// max over m in [tail_start, T] of |X_{1:m} ∩ A| / m.
double mu_hat_estimate(const MeasurableSet& a, const std::vector<Point>& sample, std::size_t tail_start);
std::size_t default_tail_start(std::size_t horizon);

// For the disagreement series d_t = loss(f(x_t), g(x_t)):
// max_{u <= s <= m} avg(d_{1:s}) - max_{u <= s <= n} avg(d_{1:s}).
double stability_gap(const SimpleFunction& f, const SimpleFunction& g, const std::vector<Point>& sample, std::size_t u,
                     std::size_t n, std::size_t m, const LossSpace& space);

}  // namespace ulab
