#include <doctest.h>

#include <cmath>
#include <vector>

#include "roadcov/stats.hpp"

using namespace roadcov;

TEST_CASE("compensated sum keeps the small terms") {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
}

TEST_CASE("Wilson interval") {
  // closed form for 30 of 100 at z = 1.96
  const double n = 100, p = 0.3, z = 1.959963984540054;
  const double centre = (p + z * z / (2 * n)) / (1 + z * z / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n);
  const auto ci = wilson_interval(30, 100);
  CHECK(ci.low == doctest::Approx(centre - half).epsilon(1e-14));
  CHECK(ci.high == doctest::Approx(centre + half).epsilon(1e-14));
  CHECK(wilson_interval(0, 50).low == 0.0);
  CHECK(wilson_interval(50, 50).high == 1.0);
  CHECK(wilson_interval(0, 50).high > 0.0);
  CHECK_THROWS(wilson_interval(3, 2));
}

TEST_CASE("mean estimate") {
  const std::vector<double> x{1, 2, 3, 4};
  const auto m = mean_estimate(x);
  CHECK(m.mean == 2.5);
  CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 3 / 4)));
  CHECK(m.count == 4);
}

TEST_CASE("Kolmogorov distribution tail") {
  CHECK(kolmogorov_tail(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_tail(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
  CHECK(kolmogorov_tail(0.5) == doctest::Approx(0.963945).epsilon(1e-5));
  // both branches meet
  CHECK(kolmogorov_tail(1.18 - 1e-9) == doctest::Approx(kolmogorov_tail(1.18 + 1e-9)).epsilon(1e-7));
  CHECK(kolmogorov_tail(0.0) == 1.0);
}

TEST_CASE("KS test accepts the right law and rejects a shifted one") {
  std::vector<double> u;
  for (int i = 0; i < 2000; ++i) u.push_back((i + 0.5) / 2000.0);
  const auto same = ks_test(u, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(same.statistic == doctest::Approx(0.5 / 2000));
  CHECK(same.p_value > 0.99);
  const auto shifted = ks_test(u, [](double x) { return std::clamp(x * 1.2, 0.0, 1.0); });
  CHECK(shifted.p_value < 1e-6);
}
