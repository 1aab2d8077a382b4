#include <doctest.h>

#include <cmath>
#include <vector>

#include "roadcov/analytic.hpp"

using namespace roadcov;

namespace {

const std::vector<LaplaceScenario> kScenarios = {
    LaplaceScenario::uav_served_i1_mhc, LaplaceScenario::uav_served_i2_all_aps,
    LaplaceScenario::ap_served_i1_ppp, LaplaceScenario::ap_served_i2_other_lines};

LaplaceSpec spec_for(LaplaceScenario s) {
  return {s, s == LaplaceScenario::uav_served_i1_mhc ? 250.0 : 0.0, SpectrumMode::shared};
}

// Richardson-extrapolated central differences of exp(-s sigma^2) L(s)
struct FiniteDifference {
  const LaplaceSpec& spec;
  const SystemParams& p;
  AnalyticOptions opts;

  double f(double s) const { return std::exp(-s * p.power.sigma2) * laplace_transform(spec, s, p, opts); }
  double d1(double s, double h) const { return (f(s + h) - f(s - h)) / (2 * h); }
  double d2(double s, double h) const { return (f(s + h) - 2 * f(s) + f(s - h)) / (h * h); }
  double first(double s, double h) const { return (4 * d1(s, h / 2) - d1(s, h)) / 3; }
  double second(double s, double h) const { return (4 * d2(s, h / 2) - d2(s, h)) / 3; }
};

}  // namespace

TEST_CASE("every transform is exactly one at s = 0 and decreasing") {
  const SystemParams p;
  for (auto sc : kScenarios) {
    const auto spec = spec_for(sc);
    CAPTURE(to_string(sc));
    CHECK(laplace_transform(spec, 0.0, p) == 1.0);
    double prev = 1.0;
    for (double s = 1e3; s < 1e8; s *= 3) {
      const double v = laplace_transform(spec, s, p);
      CHECK(v < prev);
      CHECK(v > 0.0);
      prev = v;
    }
  }
}

TEST_CASE("inactive scenarios are identically one") {
  const SystemParams p;
  LaplaceSpec spec{LaplaceScenario::uav_served_i2_all_aps, 0.0, SpectrumMode::orthogonal};
  CHECK_FALSE(scenario_active(spec));
  CHECK(laplace_transform(spec, 1e6, p) == 1.0);
  spec = {LaplaceScenario::ap_served_i1_ppp, 0.0, SpectrumMode::ap_only};
  CHECK(laplace_transform(spec, 1e6, p) == 1.0);
}

TEST_CASE("doubling the layers squares the planar AP transform") {
  SystemParams p, doubled;
  doubled.lambda_a = {0.002, 0.002, 0.002, 0.002, 0.002, 0.002};
  for (double s : {1e4, 1e5, 1e6}) {
    const double single = laplace_i2_uav_served(s, p);
    CHECK(laplace_i2_uav_served(s, doubled) == doctest::Approx(single * single).epsilon(1e-7));
  }
}

TEST_CASE("Bell recursion on a linear exponent") {
  const double c = 0.7, s = 2.0;
  DerivativeArray x = DerivativeArray::Zero(6);
  x(0) = -c * s;
  x(1) = -c * s;
  const DerivativeArray e = exp_derivatives(x);
  for (int k = 0; k < 6; ++k)
    CHECK(e(k) == doctest::Approx(std::pow(-c * s, k) * std::exp(-c * s)).epsilon(1e-14));
}

TEST_CASE("derivative engine agrees with finite differences") {
  const SystemParams p;
  AnalyticOptions tight;
  tight.rel_tol = 1e-11;
  tight.abs_tol = 1e-16;
  for (auto sc : kScenarios) {
    const auto spec = spec_for(sc);
    CAPTURE(to_string(sc));
    const double s = laplace_scale(spec, p);
    const auto d = laplace_derivatives(spec, s, 2, p, tight);
    const FiniteDifference fd{spec, p, tight};
    const double h = 0.05 * s;
    CHECK(d[0] == doctest::Approx(fd.f(s)).epsilon(1e-10));
    CHECK(d[1] == doctest::Approx(fd.first(s, h)).epsilon(1e-4));
    CHECK(d[2] == doctest::Approx(fd.second(s, h)).epsilon(1e-4));
  }
}

TEST_CASE("gamma moment match") {
  const std::vector<double> shapes{3, 3, 3}, scales{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const auto g = gamma_moment_match(shapes, scales);
  CHECK(g.k_S == 9.0);
  CHECK(g.theta_S == 1.0 / 3);
  CHECK(g.k_rounded == 9);
  CHECK(g.eta == doctest::Approx(0.72338).epsilon(1e-4));
  CHECK(std::abs(g.eta - 0.7233) <= 1e-4);

  // mean 3.5, variance 2.75
  const std::vector<double> s2{2, 3}, t2{1.0, 0.5};
  const auto h = gamma_moment_match(s2, t2);
  CHECK(h.k_S == doctest::Approx(3.5 * 3.5 / 2.75));
  CHECK(h.theta_S == doctest::Approx(2.75 / 3.5));
  CHECK(h.k_rounded == 4);
}

TEST_CASE("coverage is a decreasing probability in the threshold") {
  const SystemParams p;
  for (SpectrumMode mode : {SpectrumMode::shared, SpectrumMode::orthogonal, SpectrumMode::ap_only}) {
    CAPTURE(to_string(mode));
    double prev = 1.0;
    for (double db : {-10.0, -3.0, 4.0, 11.0, 18.0}) {
      const double c = coverage_probability(std::pow(10.0, db / 10), p, mode);
      CHECK(c <= prev);
      CHECK(c >= 0.0);
      prev = c;
    }
  }
}

TEST_CASE("removing cross-tier interference never hurts") {
  const SystemParams p;
  for (double g : {0.1, 1.0, 10.0})
    CHECK(coverage_probability(g, p, SpectrumMode::orthogonal) >= coverage_probability(g, p, SpectrumMode::shared));
}

TEST_CASE("a vanishing threshold gives full coverage") {
  const SystemParams p;
  CHECK(coverage_probability(1e-9, p, SpectrumMode::shared) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(coverage_probability(1e-9, p, SpectrumMode::ap_only) == doctest::Approx(1.0).epsilon(1e-3));
}

// with alpha_L = 2 and a nonzero LoS floor the far UAV interference grows like
// log R, so the window is part of the model and both backends must share it
TEST_CASE("a wider window only adds interference") {
  SystemParams p, wide;
  wide.window_radius = 4000.0;
  const double narrow_cov = coverage_probability(1.0, p, SpectrumMode::shared);
  const double wide_cov = coverage_probability(1.0, wide, SpectrumMode::shared);
  CHECK(wide_cov < narrow_cov);
  CHECK(narrow_cov - wide_cov < 0.02);
  CHECK(coverage_probability(1.0, wide, SpectrumMode::ap_only) ==
        doctest::Approx(coverage_probability(1.0, p, SpectrumMode::ap_only)).epsilon(0.01));
}
