#include "roadcov/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roadcov/errors.hpp"
#include "roadcov/point_processes.hpp"
#include "roadcov/propagation.hpp"
#include "roadcov/quadrature.hpp"

namespace roadcov {

namespace {

constexpr double kPi = std::numbers::pi;

QuadratureOptions probability_tolerance(const char* label) {
  QuadratureOptions opts;
  opts.abs_tol = 1e-10;
  opts.rel_tol = 1e-9;
  opts.label = label;
  return opts;
}

}  // namespace

NetworkSnapshot NetworkSnapshot::restricted_to(double radius) const {
  NetworkSnapshot out;
  out.window_radius = radius;
  const double r2 = radius * radius;
  for (const auto& u : uavs)
    if (u.position.head<2>().squaredNorm() <= r2) out.uavs.push_back(u);
  for (const auto& road : roads) {
    if (!road.line.is_typical && std::abs(road.line.rho) > radius) continue;
    Road kept{road.line, {}};
    for (const auto& layer : road.layers) {
      auto& dst = kept.layers.emplace_back();
      for (const auto& ap : layer)
        if (ap.position.head<2>().squaredNorm() <= r2) dst.push_back(ap);
    }
    out.roads.push_back(std::move(kept));
  }
  return out;
}

AssociationOutcome associate(const NetworkSnapshot& snapshot, const SystemParams& params,
                             SpectrumMode mode) {
  if (snapshot.roads.empty() || !snapshot.typical_road().line.is_typical)
    throw ResampleError("associate: snapshot has no typical road");
  const Road& typical = snapshot.typical_road();
  const int typical_index = static_cast<int>(snapshot.roads.size()) - 1;
  const auto& ch = params.channel;
  const auto& pw = params.power;

  AssociationOutcome out;
  std::vector<NodeId> nearest_per_layer;
  const int contender_layers =
      params.options.contender == AssociationContender::all_layers ? params.layers() : 1;
  double r2 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(typical.layers.size()); ++k) {
    const auto& layer = typical.layers[k];
    if (layer.empty()) throw ResampleError("associate: empty AP layer on the typical road");
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < layer.size(); ++i) {
      const double dist = layer[i].position.norm();
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    nearest_per_layer.push_back({typical_index, k, best});
    out.layer_distances.push_back(best_dist);
    if (k < contender_layers) r2 = std::min(r2, best_dist);
  }
  out.nearest_ap_distance = r2;

  if (mode == SpectrumMode::ap_only) {
    out.tier = Tier::ap;
    out.serving_distance = r2;
    out.serving_node_ids = std::move(nearest_per_layer);
    return out;
  }

  if (snapshot.uavs.empty()) throw ResampleError("associate: no UAV in the window");
  std::size_t nearest = 0;
  double nearest_h2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < snapshot.uavs.size(); ++i) {
    const double h2 = snapshot.uavs[i].position.head<2>().squaredNorm();
    if (h2 < nearest_h2) {
      nearest_h2 = h2;
      nearest = i;
    }
  }
  const UavNode& uav = snapshot.uavs[nearest];
  const double r1 = uav.position.norm();
  out.nearest_uav_distance = r1;
  out.nearest_uav_state = uav.state;

  const double uav_biased = pw.B_U * pw.P_U * ch.G_U * std::pow(r1, -params.alpha_uav(uav.state));
  const double ap_biased = pw.B_a * pw.P_a * ch.G_a * std::pow(r2, -ch.alpha_a);
  if (uav_biased >= ap_biased) {
    out.tier = Tier::uav;
    out.los_state = uav.state;
    out.serving_distance = r1;
    out.serving_node_ids = {NodeId{-1, -1, nearest}};
  } else {
    out.tier = Tier::ap;
    out.serving_distance = r2;
    out.serving_node_ids = std::move(nearest_per_layer);
  }
  return out;
}

double uav_intensity(const SystemParams& params) { return params.mhc.lambda_u; }

double exclusion_area_term(double r2, LinkState v, const SystemParams& params) {
  const double alpha_v = params.alpha_uav(v);
  const double H = params.channel.H_U;
  const double reach = std::pow(params.xi21(), -2.0 / alpha_v) *
                       std::pow(r2, 2.0 * params.channel.alpha_a / alpha_v);
  return std::max(0.0, reach - H * H);
}

double uav_exclusion_radius(double r2, LinkState v, const SystemParams& params) {
  const double alpha_v = params.alpha_uav(v);
  const double reach =
      std::pow(params.xi21(), -1.0 / alpha_v) * std::pow(r2, params.channel.alpha_a / alpha_v);
  return std::max(params.channel.H_U, reach);
}

double uav_wins_given_distance(double r, LinkState v, const SystemParams& params) {
  const double alpha_a = params.channel.alpha_a;
  const double threshold =
      std::pow(params.xi21(), 1.0 / alpha_a) * std::pow(r, params.alpha_uav(v) / alpha_a);
  return std::exp(-2.0 * params.lambda_a_contender() * threshold);
}

double tier1_conditional_assoc_prob(LinkState v, const SystemParams& params) {
  require(v != LinkState::not_applicable, "tier1_conditional_assoc_prob: link state required");
  const double lambda_u = uav_intensity(params);
  const double lambda_a = params.lambda_a_contender();
  const double alpha_v = params.alpha_uav(v);
  // rho(r2) vanishes below r_star, where the AP always wins
  const double r_star =
      std::pow(params.channel.H_U, alpha_v / params.channel.alpha_a) *
      std::pow(params.xi21(), 1.0 / params.channel.alpha_a);
  const double below = -std::expm1(-2.0 * lambda_a * r_star);
  auto integrand = [&](double r2) {
    return std::exp(-lambda_u * kPi * exclusion_area_term(r2, v, params) - 2.0 * lambda_a * r2) *
           2.0 * lambda_a;
  };
  const double above =
      integrate_to_infinity(integrand, r_star, 1.0 / (2.0 * lambda_a),
                            probability_tolerance("tier1_conditional_assoc_prob"))
          .value;
  return std::clamp(1.0 - below - above, 0.0, 1.0);
}

double aerial_los_assoc_prob(const SystemParams& params) {
  const double lambda_u = uav_intensity(params);
  auto integrand = [&](double z) {
    return los_probability(z, params.channel) * 2.0 * kPi * lambda_u * z *
           std::exp(-kPi * lambda_u * z * z);
  };
  const double scale = 1.0 / std::sqrt(kPi * lambda_u);
  return std::clamp(
      integrate_to_infinity(integrand, 0.0, scale, probability_tolerance("aerial_los_assoc_prob"))
          .value,
      0.0, 1.0);
}

std::pair<double, double> event_probabilities(const SystemParams& params) {
  const double a_los = aerial_los_assoc_prob(params);
  const double p1 = a_los * tier1_conditional_assoc_prob(LinkState::los, params) +
                    (1.0 - a_los) * tier1_conditional_assoc_prob(LinkState::nlos, params);
  return {p1, 1.0 - p1};
}

double serving_pdf_given_uav(double r, LinkState v, const SystemParams& params) {
  const double H = params.channel.H_U;
  if (r < H) return 0.0;
  const double a1 = tier1_conditional_assoc_prob(v, params);
  if (!(a1 > 0.0)) throw NumericError("serving_pdf_given_uav: A_v^1 = 0, conditional undefined");
  const double lambda_u = uav_intensity(params);
  return 2.0 * kPi * lambda_u * r / a1 * std::exp(-kPi * lambda_u * (r * r - H * H)) *
         uav_wins_given_distance(r, v, params);
}

double serving_pdf_given_ap(double r, LinkState v, const SystemParams& params) {
  if (r < 0.0) return 0.0;
  const double a2 = 1.0 - tier1_conditional_assoc_prob(v, params);
  if (!(a2 > 0.0)) throw NumericError("serving_pdf_given_ap: A_v^2 = 0, conditional undefined");
  const double lambda_a = params.lambda_a_contender();
  const double lambda_u = uav_intensity(params);
  return 2.0 * lambda_a / a2 *
         std::exp(-2.0 * lambda_a * r - kPi * lambda_u * exclusion_area_term(r, v, params));
}

double serving_cdf_given_uav(double r, LinkState v, const SystemParams& params) {
  const double H = params.channel.H_U;
  if (r <= H) return 0.0;
  const double a1 = tier1_conditional_assoc_prob(v, params);
  const double lambda_u = uav_intensity(params);
  auto joint = [&](double x) {
    return 2.0 * kPi * lambda_u * x * std::exp(-kPi * lambda_u * (x * x - H * H)) *
           uav_wins_given_distance(x, v, params);
  };
  return std::clamp(integrate(joint, H, r, probability_tolerance("serving_cdf_given_uav")).value / a1,
                    0.0, 1.0);
}

double serving_cdf_given_ap(double r, LinkState v, const SystemParams& params) {
  if (r <= 0.0) return 0.0;
  const double a2 = 1.0 - tier1_conditional_assoc_prob(v, params);
  const double lambda_a = params.lambda_a_contender();
  const double lambda_u = uav_intensity(params);
  auto joint = [&](double x) {
    return 2.0 * lambda_a *
           std::exp(-2.0 * lambda_a * x - kPi * lambda_u * exclusion_area_term(x, v, params));
  };
  return std::clamp(integrate(joint, 0.0, r, probability_tolerance("serving_cdf_given_ap")).value / a2,
                    0.0, 1.0);
}

}  // namespace roadcov
