#include "roadcov/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roadcov/errors.hpp"
#include "roadcov/point_processes.hpp"
#include "roadcov/propagation.hpp"

namespace roadcov {

namespace {

std::uint32_t substream(StreamTag tag, int attempt) {
  return static_cast<std::uint32_t>(tag) + 16u * static_cast<std::uint32_t>(attempt);
}

NetworkSnapshot draw(const SystemParams& p, std::uint64_t seed, std::uint64_t trial, int attempt) {
  const auto& ch = p.channel;
  const double R = p.window_radius;
  Philox4x32 field_rng(seed, trial, substream(StreamTag::uav_field, attempt));
  Philox4x32 los_rng(seed, trial, substream(StreamTag::uav_los, attempt));
  Philox4x32 road_rng(seed, trial, substream(StreamTag::roads, attempt));
  Philox4x32 ap_rng(seed, trial, substream(StreamTag::access_points, attempt));
  Philox4x32 fading_rng(seed, trial, substream(StreamTag::fading, attempt));

  NetworkSnapshot snap;
  snap.window_radius = R;
  const std::vector<Point3> uav_points =
      p.options.uav_field == UavField::matern
          ? sample_mhc2(p.mhc, R, field_rng, ch.H_U)
          : sample_ppp_disk(p.mhc.lambda_u, R, field_rng, ch.H_U);
  snap.uavs.reserve(uav_points.size());
  for (const auto& pos : uav_points) {
    UavNode node{pos};
    const double z = pos.head<2>().norm();
    node.state = los_rng.uniform() < los_probability(z, ch) ? LinkState::los : LinkState::nlos;
    node.fading = sample_nakagami_power(p.m_uav(node.state), fading_rng);
    snap.uavs.push_back(node);
  }

  for (const Line& line : sample_plp(p.lambda_l, R, road_rng)) {
    Road road{line, {}};
    const double half = line.is_typical ? R : line.half_chord(R);
    const int m = line.is_typical ? ch.m_21 : ch.m_22;
    for (double lambda_a : p.lambda_a) {
      auto& layer = road.layers.emplace_back();
      for (const auto& pos : sample_ppp_on_line(lambda_a, line, half, ap_rng))
        layer.push_back({pos, sample_nakagami_power(m, fading_rng)});
    }
    snap.roads.push_back(std::move(road));
  }
  return snap;
}

bool usable(const NetworkSnapshot& snap, SpectrumMode mode) {
  if (mode != SpectrumMode::ap_only && snap.uavs.empty()) return false;
  for (const auto& layer : snap.typical_road().layers)
    if (layer.empty()) return false;
  return true;
}

bool contains(const std::vector<NodeId>& ids, const NodeId& id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

double uav_received(const UavNode& u, const SystemParams& p, double gain) {
  return received_power(p.power.P_U, gain, u.fading, u.position.norm(), p.alpha_uav(u.state));
}

double ap_received(const ApNode& a, const SystemParams& p) {
  return received_power(p.power.P_a, p.channel.g_a, a.fading, a.position.norm(), p.channel.alpha_a);
}

}  // namespace

NetworkSnapshot sample_snapshot(const SystemParams& params, SpectrumMode mode, std::uint64_t seed,
                                std::uint64_t trial_index, int* attempts) {
  for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
    NetworkSnapshot snap = draw(params, seed, trial_index, attempt);
    if (usable(snap, mode)) {
      if (attempts) *attempts = attempt + 1;
      return snap;
    }
  }
  throw ResampleError("trial " + std::to_string(trial_index) + ": no usable snapshot after " +
                      std::to_string(kMaxResampleAttempts) +
                      " attempts; the simulation window is too small for these densities");
}

TrialResult evaluate_snapshot(const NetworkSnapshot& snap, const SystemParams& p,
                              SpectrumMode mode) {
  TrialResult out;
  out.outcome = associate(snap, p, mode);
  const auto& ids = out.outcome.serving_node_ids;
  const bool uav_served = out.outcome.tier == Tier::uav;
  const int typical = static_cast<int>(snap.roads.size()) - 1;

  const bool hear_uavs = mode == SpectrumMode::shared || (uav_served && mode != SpectrumMode::ap_only);
  const bool hear_aps = mode != SpectrumMode::orthogonal || !uav_served;

  std::size_t excluded = 0;
  CompensatedSum i1;
  for (std::size_t j = 0; j < snap.uavs.size(); ++j) {
    if (uav_served && contains(ids, NodeId{-1, -1, j})) {
      out.desired = uav_received(snap.uavs[j], p, p.channel.G_U);
      ++excluded;
      continue;
    }
    if (hear_uavs) i1.add(uav_received(snap.uavs[j], p, p.channel.g_U));
  }

  CompensatedSum i21, i22, desired_ap;
  for (int r = 0; r <= typical; ++r) {
    const auto& layers = snap.roads[r].layers;
    for (int k = 0; k < static_cast<int>(layers.size()); ++k) {
      for (std::size_t i = 0; i < layers[k].size(); ++i) {
        const ApNode& ap = layers[k][i];
        if (!uav_served && contains(ids, NodeId{r, k, i})) {
          // power control cancels the path loss of each serving AP
          desired_ap.add(p.power.C * p.channel.G_a * ap.fading);
          ++excluded;
          continue;
        }
        if (!hear_aps) continue;
        (r == typical ? i21 : i22).add(ap_received(ap, p));
      }
    }
  }
  if (excluded != ids.size())
    throw NumericError("evaluate_snapshot: serving node set does not match the snapshot");
  if (!uav_served) out.desired = desired_ap.value();

  out.i1 = i1.value();
  out.i21 = i21.value();
  out.i22 = i22.value();
  const double noise = p.power.sigma2;
  out.sinr_all = out.desired / (noise + out.i1 + out.i21 + out.i22);
  out.sinr = uav_served ? out.sinr_all : out.desired / (noise + out.i1 + out.i22);
  return out;
}

TrialResult run_trial(const SystemParams& params, SpectrumMode mode, std::uint64_t seed,
                      std::uint64_t trial_index) {
  int attempts = 1;
  const NetworkSnapshot snap = sample_snapshot(params, mode, seed, trial_index, &attempts);
  TrialResult out = evaluate_snapshot(snap, params, mode);
  out.attempts = attempts;
  return out;
}

CoverageCurve estimate_coverage(const SystemParams& params, SpectrumMode mode,
                                std::span<const double> thresholds, long n_trials,
                                std::uint64_t seed, int workers) {
  params.validate();
  require(n_trials >= 100, "estimate_coverage: need at least 100 trials");
  struct Compact {
    double sinr, sinr_all;
    bool uav;
    int attempts;
  };
  const auto trials = map_trials<Compact>(n_trials, workers, [&](long i) {
    const TrialResult t = run_trial(params, mode, seed, static_cast<std::uint64_t>(i));
    return Compact{t.sinr, t.sinr_all, t.outcome.tier == Tier::uav, t.attempts};
  });

  CoverageCurve curve;
  curve.n_trials = n_trials;
  long uav = 0, attempts = 0;
  for (const auto& t : trials) {
    uav += t.uav;
    attempts += t.attempts;
  }
  curve.uav_served_fraction = static_cast<double>(uav) / n_trials;
  curve.mean_attempts = static_cast<double>(attempts) / n_trials;
  for (double threshold : thresholds) {
    long hit = 0, hit_all = 0;
    for (const auto& t : trials) {
      hit += t.sinr >= threshold;
      hit_all += t.sinr_all >= threshold;
    }
    curve.points.push_back({threshold, static_cast<double>(hit) / n_trials,
                            wilson_interval(hit, n_trials),
                            static_cast<double>(hit_all) / n_trials});
  }
  return curve;
}

LaplaceEstimate estimate_laplace(const SystemParams& params, const LaplaceSpec& spec,
                                 std::span<const double> s_grid, long n_trials,
                                 std::uint64_t seed, int workers) {
  params.validate();
  for (double s : s_grid) require(s >= 0.0, "estimate_laplace: s must be non-negative");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const bool active = scenario_active(spec);
  const double r_target = spec.conditioning_distance;
  if (spec.scenario == LaplaceScenario::uav_served_i1_mhc)
    require(r_target >= params.channel.H_U,
            "estimate_laplace: conditioning distance must be at least the altitude");

  // one interference sample per trial, NaN outside the conditioning bin
  const auto samples = map_trials<double>(n_trials, workers, [&](long i) {
    const NetworkSnapshot snap =
        sample_snapshot(params, SpectrumMode::shared, seed, static_cast<std::uint64_t>(i));
    CompensatedSum sum;
    switch (spec.scenario) {
      case LaplaceScenario::uav_served_i1_mhc: {
        std::size_t nearest = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < snap.uavs.size(); ++j) {
          const double r = snap.uavs[j].position.norm();
          if (r < best) best = r, nearest = j;
        }
        if (std::abs(best - r_target) > kConditioningBin * r_target) return nan;
        for (std::size_t j = 0; j < snap.uavs.size(); ++j)
          if (j != nearest) sum.add(uav_received(snap.uavs[j], params, params.channel.g_U));
        break;
      }
      case LaplaceScenario::ap_served_i1_ppp: {
        const double lower = std::max(params.channel.H_U, r_target);
        for (const auto& u : snap.uavs)
          if (u.position.norm() >= lower) sum.add(uav_received(u, params, params.channel.g_U));
        break;
      }
      case LaplaceScenario::uav_served_i2_all_aps:
      case LaplaceScenario::ap_served_i2_other_lines: {
        const bool skip_typical = spec.scenario == LaplaceScenario::ap_served_i2_other_lines;
        for (const auto& road : snap.roads) {
          if (skip_typical && road.line.is_typical) continue;
          for (const auto& layer : road.layers)
            for (const auto& ap : layer) sum.add(ap_received(ap, params));
        }
        break;
      }
    }
    return active ? sum.value() : 0.0;
  });

  std::vector<double> kept;
  for (double x : samples)
    if (!std::isnan(x)) kept.push_back(x);
  LaplaceEstimate out;
  out.n_trials = n_trials;
  out.samples = static_cast<long>(kept.size());
  std::vector<double> values(kept.size());
  for (double s : s_grid) {
    for (std::size_t i = 0; i < kept.size(); ++i) values[i] = std::exp(-s * kept[i]);
    out.points.push_back({s, mean_estimate(values)});
  }
  return out;
}

AssociationStats empirical_association_stats(const SystemParams& params, long n_trials,
                                             std::uint64_t seed, int workers) {
  params.validate();
  const auto outcomes = map_trials<AssociationOutcome>(n_trials, workers, [&](long i) {
    const NetworkSnapshot snap =
        sample_snapshot(params, SpectrumMode::shared, seed, static_cast<std::uint64_t>(i));
    return associate(snap, params, SpectrumMode::shared);
  });
  AssociationStats st;
  st.n_trials = n_trials;
  long uav_los = 0, uav_nlos = 0, ap = 0, near_los = 0;
  const auto& pw = params.power;
  const auto& ch = params.channel;
  for (const auto& o : outcomes) {
    st.nearest_uav.push_back(o.nearest_uav_distance);
    st.nearest_ap.push_back(o.nearest_ap_distance);
    near_los += o.nearest_uav_state == LinkState::los;
    if (o.tier == Tier::uav)
      (o.los_state == LinkState::los ? uav_los : uav_nlos)++;
    else
      ++ap;
    const double ap_biased =
        pw.B_a * pw.P_a * ch.G_a * std::pow(o.nearest_ap_distance, -ch.alpha_a);
    for (LinkState v : {LinkState::los, LinkState::nlos}) {
      const double uav_biased =
          pw.B_U * pw.P_U * ch.G_U * std::pow(o.nearest_uav_distance, -params.alpha_uav(v));
      const bool los = v == LinkState::los;
      if (uav_biased >= ap_biased)
        (los ? st.serving_uav_los : st.serving_uav_nlos).push_back(o.nearest_uav_distance);
      else
        (los ? st.serving_ap_los : st.serving_ap_nlos).push_back(o.nearest_ap_distance);
    }
  }
  const double n = static_cast<double>(n_trials);
  st.freq_uav_los = uav_los / n;
  st.freq_uav_nlos = uav_nlos / n;
  st.freq_ap = ap / n;
  st.freq_nearest_los = near_los / n;
  return st;
}

}  // namespace roadcov
