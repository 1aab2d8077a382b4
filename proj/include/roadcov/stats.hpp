#pragma once

#include <functional>
#include <span>
#include <vector>

namespace roadcov {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for a binomial proportion (z = 1.96 for 95%).
Interval wilson_interval(long successes, long trials, double z = 1.959963984540054);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long count = 0;
  Interval ci95;  // normal approximation
};

MeanEstimate mean_estimate(std::span<const double> samples);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  long n = 0;
};

/// P(sqrt(n) D_n > x) in the large-n limit.
double kolmogorov_tail(double x);

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace roadcov
