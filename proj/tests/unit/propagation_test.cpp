#include <doctest.h>

#include <cmath>

#include "roadcov/propagation.hpp"
#include "roadcov/stats.hpp"

using namespace roadcov;

TEST_CASE("LoS probability at reference elevations") {
  const ChannelParams ch;
  CHECK(los_probability(0.0, ch) == doctest::Approx(0.99772).epsilon(1e-5));
  CHECK(los_probability(100.0, ch) == doctest::Approx(0.75578).epsilon(1e-4));
  CHECK(los_probability_floor(ch) == doctest::Approx(0.021448).epsilon(1e-4));
  CHECK(los_probability(1e9, ch) == doctest::Approx(los_probability_floor(ch)).epsilon(1e-6));
  CHECK(nlos_probability(250.0, ch) == doctest::Approx(1.0 - los_probability(250.0, ch)));
  double prev = 1.0;
  for (double z = 0.0; z < 5000.0; z += 50.0) {
    const double p = los_probability(z, ch);
    CHECK(p <= prev);
    prev = p;
  }
  CHECK_THROWS_AS(los_probability(-1.0, ch), ParameterError);
}

TEST_CASE("Nakagami power gain has unit mean and variance 1/m") {
  for (int m : {1, 3, 5}) {
    Philox4x32 rng(5, m, StreamTag::fading);
    std::vector<double> h(200000), h2(200000);
    for (std::size_t i = 0; i < h.size(); ++i) {
      h[i] = sample_nakagami_power(m, rng);
      h2[i] = (h[i] - 1.0) * (h[i] - 1.0);
    }
    const auto mean = mean_estimate(h);
    CHECK(std::abs(mean.mean - 1.0) < 4 * mean.std_error);
    CHECK(mean_estimate(h2).mean == doctest::Approx(1.0 / m).epsilon(0.03));
  }
  Philox4x32 rng(1, 0);
  CHECK_THROWS_AS(sample_nakagami_power(0, rng), ParameterError);
}

TEST_CASE("power control cancels the AP path loss") {
  for (double r : {1.0, 37.5, 900.0}) {
    const double p = power_controlled_ap_power(1e-7, r, 3.0);
    CHECK(received_power(p, 1.0, 1.0, r, 3.0) == doctest::Approx(1e-7).epsilon(1e-12));
  }
  CHECK(received_power(2.0, 1.0, 0.5, 10.0, 2.0) == doctest::Approx(0.01));
  CHECK_THROWS_AS(received_power(1.0, 1.0, 1.0, 0.0, 2.0), ParameterError);
}
