#include "ulab/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ulab/error.hpp"

namespace ulab {

PrefixLossSeries::PrefixLossSeries(const std::vector<double>& losses) {
  cum_.reserve(losses.size() + 1);
  for (double l : losses) push(l);
}

void PrefixLossSeries::push(double loss) {
  if (!(loss >= 0.0) || !std::isfinite(loss)) {
    throw NumericError("loss series: loss must be finite and nonnegative, got " + std::to_string(loss));
  }
  cum_.push_back(cum_.back() + loss);
}

double PrefixLossSeries::average(std::size_t m) const {
  if (m == 0 || m > size()) throw UsageError("loss series: average over prefix " + std::to_string(m) + " of " +
                                             std::to_string(size()));
  return cum_[m] / static_cast<double>(m);
}

double prefix_max_risk(const PrefixLossSeries& series, std::size_t m0, std::size_t n) {
  if (m0 == 0) throw UsageError("prefix_max_risk: m0 must be positive");
  if (m0 > n) throw UsageError("prefix_max_risk: m0 = " + std::to_string(m0) + " exceeds n = " + std::to_string(n));
  if (n > series.size()) {
    throw UsageError("prefix_max_risk: n = " + std::to_string(n) + " exceeds series length " +
                     std::to_string(series.size()));
  }
  double best = 0.0;
  for (std::size_t m = m0; m <= n; ++m) best = std::max(best, series.sum(m) / static_cast<double>(m));
  return best;
}

std::size_t default_tail_start(std::size_t horizon) {
  return std::max<std::size_t>(1, (horizon + 3) / 4);
}

double mu_hat_estimate(const MeasurableSet& a, const std::vector<Point>& sample, std::size_t tail_start) {
  if (sample.empty()) throw UsageError("mu_hat_estimate: empty sample");
  if (tail_start == 0 || tail_start > sample.size()) {
    throw UsageError("mu_hat_estimate: tail_start " + std::to_string(tail_start) + " outside [1, " +
                     std::to_string(sample.size()) + "]");
  }
  std::size_t hits = 0;
  double best = 0.0;
  for (std::size_t m = 1; m <= sample.size(); ++m) {
    if (a.contains(sample[m - 1])) ++hits;
    if (m >= tail_start) best = std::max(best, static_cast<double>(hits) / static_cast<double>(m));
  }
  return best;
}

double stability_gap(const SimpleFunction& f, const SimpleFunction& g, const std::vector<Point>& sample, std::size_t u,
                     std::size_t n, std::size_t m, const LossSpace& space) {
  if (!(1 <= u && u <= n && n <= m && m <= sample.size())) {
    throw UsageError("stability_gap: need 1 <= u <= n <= m <= " + std::to_string(sample.size()) + ", got u=" +
                     std::to_string(u) + " n=" + std::to_string(n) + " m=" + std::to_string(m));
  }
  PrefixLossSeries d;
  for (std::size_t t = 0; t < m; ++t) d.push(space.loss(f(sample[t]), g(sample[t])));
  return std::max(0.0, prefix_max_risk(d, u, m) - prefix_max_risk(d, u, n));
}

}  // namespace ulab
