#include <doctest.h>

#include <cmath>
#include <numbers>

#include "roadcov/point_processes.hpp"
#include "roadcov/stats.hpp"
#include "roadcov/validation.hpp"

using namespace roadcov;

namespace {
constexpr double kPi = std::numbers::pi;

// lens-subtraction form, written independently of the library's closed form
double union_oracle(double v, double d) {
  if (v >= 2 * d) return 2 * kPi * d * d;
  const double lens = 2 * d * d * std::acos(v / (2 * d)) - 0.5 * v * std::sqrt(4 * d * d - v * v);
  return 2 * kPi * d * d - lens;
}
}  // namespace

TEST_CASE("line process count in the window has mean 2 pi lambda_l R") {
  const double lambda_l = 0.01 / kPi, R = 2000.0;
  std::vector<double> counts;
  for (int i = 0; i < 2000; ++i) {
    Philox4x32 rng(7, i, StreamTag::roads);
    const auto lines = sample_plp(lambda_l, R, rng);
    CHECK(lines.back().is_typical);
    CHECK(lines.back().rho == 0.0);
    counts.push_back(static_cast<double>(lines.size() - 1));
    for (std::size_t k = 0; k + 1 < lines.size(); ++k) {
      CHECK(std::abs(lines[k].rho) <= R);
      CHECK(lines[k].theta >= 0.0);
      CHECK(lines[k].theta < kPi);
    }
  }
  const auto est = mean_estimate(counts);
  CHECK(std::abs(est.mean - 40.0) < 3 * est.std_error);
}

TEST_CASE("access points on a segment have mean 2 lambda_a L") {
  const Line line{300.0, 0.4, false};
  std::vector<double> counts;
  for (int i = 0; i < 2000; ++i) {
    Philox4x32 rng(8, i, StreamTag::access_points);
    const auto pts = sample_ppp_on_line(0.002, line, 5000.0, rng);
    for (const auto& p : pts) {
      CHECK(std::abs(p.head<2>().dot(line.normal()) - line.rho) < 1e-9);
      CHECK(p.z() == 0.0);
    }
    counts.push_back(static_cast<double>(pts.size()));
  }
  const auto est = mean_estimate(counts);
  CHECK(std::abs(est.mean - 20.0) < 3 * est.std_error);
}

TEST_CASE("hard-core field: intensity, separation and altitude") {
  MhcParams mhc;
  CHECK(check_mhc_intensity(mhc, 2000.0, 300, 3).pass);
  CHECK(check_mhc_min_distance(mhc, 2000.0, 100, 3).pass);
  Philox4x32 rng(3, 0, StreamTag::uav_field);
  for (const auto& p : sample_mhc2(mhc, 1000.0, rng, 100.0)) {
    CHECK(p.z() == 100.0);
    CHECK(p.head<2>().norm() <= 1000.0);
  }
}

TEST_CASE("parent intensity inverts the retained intensity") {
  for (double lu : {1e-6, 1e-5, 3e-5}) {
    const double lp = mhc_parent_intensity(lu, 100.0);
    CHECK(mhc_intensity(lp, 100.0) == doctest::Approx(lu).epsilon(1e-12));
  }
  MhcParams saturated{1.0 / (kPi * 100.0 * 100.0), 100.0, std::nullopt};
  CHECK_THROWS_AS(saturated.lambda_p(), ParameterError);
}

TEST_CASE("union area of two disks") {
  const double d = 100.0;
  CHECK(union_area(0.0, d) == doctest::Approx(kPi * d * d));
  CHECK(union_area(d, d) == doctest::Approx(d * d * (4 * kPi / 3 + std::sqrt(3.0) / 2)).epsilon(1e-13));
  CHECK(union_area(2 * d, d) == doctest::Approx(2 * kPi * d * d));
  CHECK(union_area(3 * d, d) == doctest::Approx(2 * kPi * d * d));
  for (double v = 0.0; v <= 2 * d; v += 7.3) CHECK(union_area(v, d) == doctest::Approx(union_oracle(v, d)).epsilon(1e-12));
  CHECK_THROWS_AS(union_area(-1.0, d), ParameterError);
}

TEST_CASE("second-order density: zero inside d, continuous at 2d") {
  const double d = 100.0, lp = mhc_parent_intensity(1e-5, d);
  const double lu = mhc_intensity(lp, d);
  CHECK(second_order_density(0.5 * d, lp, d) == 0.0);
  CHECK(second_order_density(0.999 * d, lp, d) == 0.0);
  CHECK(second_order_density(1.001 * d, lp, d) > 0.0);
  CHECK(second_order_density(2 * d * (1 - 1e-9), lp, d) == doctest::Approx(lu * lu).epsilon(1e-6));
  CHECK(second_order_density(2.5 * d, lp, d) == lu * lu);
}

TEST_CASE("dart-throwing union area oracle") {
  CHECK(check_union_area(1.1, 100.0, 2'000'000, 11, 3e-3).pass);
}

TEST_CASE("a corrupted parent intensity fails the intensity check") {
  MhcParams mhc;
  mhc.lambda_p_override = 0.5 * mhc.lambda_p();
  const auto check = check_mhc_intensity(mhc, 2000.0, 100, 5);
  INFO(check.detail);
  CHECK_FALSE(check.pass);
}
