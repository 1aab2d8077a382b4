#include <doctest.h>

#include <cmath>
#include <numbers>

#include "roadcov/association.hpp"
#include "roadcov/montecarlo.hpp"
#include "roadcov/quadrature.hpp"
#include "roadcov/validation.hpp"

using namespace roadcov;

TEST_CASE("nearest-UAV law: median and density") {
  const double lu = 1e-5, H = 100.0;
  const double median = std::sqrt(H * H + std::log(2.0) / (std::numbers::pi * lu));
  CHECK(nearest_uav_distance_cdf(median, lu, H) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(nearest_uav_distance_cdf(H, lu, H) == 0.0);
  const double r = 250.0, h = 1e-3;
  const double fd = (nearest_uav_distance_cdf(r + h, lu, H) - nearest_uav_distance_cdf(r - h, lu, H)) / (2 * h);
  CHECK(nearest_uav_distance_pdf(r, lu, H) == doctest::Approx(fd).epsilon(1e-6));
  CHECK(nearest_ap_distance_cdf(std::log(2.0) / (2 * 0.006), 0.006) == doctest::Approx(0.5));
}

TEST_CASE("conditional serving densities integrate to one") {
  const SystemParams p;
  QuadratureOptions q;
  q.rel_tol = 1e-8;
  for (LinkState v : {LinkState::los, LinkState::nlos}) {
    auto fu = [&](double r) { return serving_pdf_given_uav(r, v, p); };
    auto fa = [&](double r) { return serving_pdf_given_ap(r, v, p); };
    CHECK(integrate(fu, std::vector<double>{100.0, 200.0, 400.0, 800.0, 1600.0, 5000.0}, q).value ==
          doctest::Approx(1.0).epsilon(1e-5));
    CHECK(integrate(fa, std::vector<double>{0.0, 50.0, 200.0, 800.0, 3000.0}, q).value ==
          doctest::Approx(1.0).epsilon(1e-5));
    CHECK(serving_cdf_given_uav(1e5, v, p) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("event probabilities sum to one and respond to the bias") {
  SystemParams p;
  const auto [e1, e2] = event_probabilities(p);
  CHECK(e1 + e2 == doctest::Approx(1.0));
  CHECK(e1 > 0.0);
  CHECK(e2 > 0.0);
  p.power.B_U = 1e12;
  CHECK(event_probabilities(p).first > 0.999);
  p.power.B_U = 1e-12;
  CHECK(event_probabilities(p).first < 1e-3);
}

TEST_CASE("UAV association frequency matches P(E1) for a Poisson UAV field") {
  SystemParams p;
  p.options.uav_field = UavField::poisson;
  const auto st = empirical_association_stats(p, 4000, 21);
  const auto check = check_association_probability(p, st);
  INFO(check.detail);
  CHECK(check.pass);
  CHECK(st.freq_uav_los + st.freq_uav_nlos + st.freq_ap == doctest::Approx(1.0));
}
