#include "roadcov/stats.hpp"

#include <algorithm>
#include <cmath>

#include "roadcov/errors.hpp"

namespace roadcov {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    carry_ += (sum_ - t) + x;
  else
    carry_ += (x - t) + sum_;
  sum_ = t;
}

Interval wilson_interval(long successes, long trials, double z) {
  require(trials > 0 && successes >= 0 && successes <= trials, "wilson_interval: bad counts");
  const double n = static_cast<double>(trials);
  const double p = successes / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  // the bounds are exact at the edges; the formula leaves rounding residue there
  return {successes == 0 ? 0.0 : std::max(0.0, centre - half),
          successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

MeanEstimate mean_estimate(std::span<const double> samples) {
  MeanEstimate out;
  out.count = static_cast<long>(samples.size());
  if (samples.empty()) return out;
  CompensatedSum sum;
  for (double x : samples) sum.add(x);
  out.mean = sum.value() / out.count;
  if (out.count > 1) {
    CompensatedSum sq;
    for (double x : samples) sq.add((x - out.mean) * (x - out.mean));
    out.std_error = std::sqrt(sq.value() / (out.count - 1) / out.count);
  }
  out.ci95 = {out.mean - 1.959963984540054 * out.std_error,
              out.mean + 1.959963984540054 * out.std_error};
  return out;
}

double kolmogorov_tail(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    // theta-function form converges fast for small x
    const double pi = 3.14159265358979323846;
    const double t = -pi * pi / (8.0 * x * x);
    double s = 0.0;
    for (int k = 1; k <= 9; k += 2) s += std::exp(k * k * t);
    return 1.0 - std::sqrt(2.0 * pi) / x * s;
  }
  double s = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += sign * term;
    if (term < 1e-17) break;
    sign = -sign;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  require(!samples.empty(), "ks_test: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sqrt_n = std::sqrt(n);
  return {d, kolmogorov_tail((sqrt_n + 0.12 + 0.11 / sqrt_n) * d), static_cast<long>(samples.size())};
}

}  // namespace roadcov
