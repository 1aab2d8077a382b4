#include <doctest.h>

#include <cmath>

#include "roadcov/montecarlo.hpp"

using namespace roadcov;

namespace {

// every node's received power, computed from the snapshot geometry alone
double total_received(const NetworkSnapshot& snap, const SystemParams& p) {
  double total = 0.0;
  for (const auto& u : snap.uavs) {
    const double alpha = u.state == LinkState::los ? p.channel.alpha_L : p.channel.alpha_NL;
    total += p.power.P_U * u.fading * std::pow(u.position.norm(), -alpha);
  }
  for (const auto& road : snap.roads)
    for (const auto& layer : road.layers)
      for (const auto& ap : layer)
        total += p.power.P_a * ap.fading * std::pow(ap.position.norm(), -p.channel.alpha_a);
  return total;
}

}  // namespace

TEST_CASE("UAV-served power budget accounts for every node exactly once") {
  const SystemParams p;
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const auto snap = sample_snapshot(p, SpectrumMode::shared, 4, t);
    const auto r = evaluate_snapshot(snap, p, SpectrumMode::shared);
    if (r.outcome.tier != Tier::uav) continue;
    ++checked;
    CHECK(r.desired + r.i1 + r.i21 + r.i22 == doctest::Approx(total_received(snap, p)).epsilon(1e-10));
    CHECK(r.outcome.serving_node_ids.size() == 1);
  }
  CHECK(checked > 50);
}

TEST_CASE("AP-served users get C G_a times the summed cluster fading") {
  const SystemParams p;
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const auto snap = sample_snapshot(p, SpectrumMode::shared, 5, t);
    const auto r = evaluate_snapshot(snap, p, SpectrumMode::shared);
    if (r.outcome.tier != Tier::ap) continue;
    ++checked;
    double h = 0.0;
    for (const auto& id : r.outcome.serving_node_ids) {
      CHECK(id.road == static_cast<int>(snap.roads.size()) - 1);
      h += snap.roads[id.road].layers[id.layer][id.index].fading;
    }
    CHECK(r.outcome.serving_node_ids.size() == static_cast<std::size_t>(p.layers()));
    CHECK(r.desired == doctest::Approx(p.power.C * p.channel.G_a * h).epsilon(1e-12));
    CHECK(r.sinr <= r.desired / p.power.sigma2);
    CHECK(r.sinr_all <= r.sinr);
  }
  CHECK(checked > 20);
}

TEST_CASE("AP-only spectrum hears no UAVs, orthogonal splits the tiers") {
  const SystemParams p;
  for (int t = 0; t < 100; ++t) {
    const auto a = run_trial(p, SpectrumMode::ap_only, 6, t);
    CHECK(a.outcome.tier == Tier::ap);
    CHECK(a.i1 == 0.0);
    const auto o = run_trial(p, SpectrumMode::orthogonal, 6, t);
    if (o.outcome.tier == Tier::uav) {
      CHECK(o.i21 == 0.0);
      CHECK(o.i22 == 0.0);
    } else {
      CHECK(o.i1 == 0.0);
    }
  }
}

TEST_CASE("vanishing AP power hands every user to the UAV tier") {
  SystemParams p;
  p.power.P_a = 1e-15;
  const std::vector<double> thr{1.0};
  const auto c = estimate_coverage(p, SpectrumMode::shared, thr, 500, 2);
  CHECK(c.uav_served_fraction == 1.0);
}

TEST_CASE("results do not depend on the worker count") {
  const SystemParams p;
  const std::vector<double> thr{0.1, 1.0, 10.0};
  const auto one = estimate_coverage(p, SpectrumMode::shared, thr, 600, 9, 1);
  const auto many = estimate_coverage(p, SpectrumMode::shared, thr, 600, 9, 7);
  for (std::size_t i = 0; i < thr.size(); ++i) {
    CHECK(one.points[i].coverage == many.points[i].coverage);
    CHECK(one.points[i].ci.low == many.points[i].ci.low);
  }
  const auto other = estimate_coverage(p, SpectrumMode::shared, thr, 600, 10, 1);
  CHECK(other.points[1].coverage != one.points[1].coverage);
}

TEST_CASE("map_trials stores by index and rethrows worker errors") {
  const auto v = map_trials<long>(1000, 3, [](long i) { return i * i; });
  for (long i = 0; i < 1000; ++i) CHECK(v[i] == i * i);
  CHECK_THROWS_AS(map_trials<int>(50, 4, [](long i) -> int {
                    if (i == 37) throw NumericError("boom");
                    return 0;
                  }),
                  NumericError);
}

TEST_CASE("coverage needs enough trials") {
  const SystemParams p;
  const std::vector<double> thr{1.0};
  CHECK_THROWS(estimate_coverage(p, SpectrumMode::shared, thr, 10, 1));
}
