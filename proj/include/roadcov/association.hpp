#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "roadcov/params.hpp"
#include "roadcov/snapshot.hpp"

namespace roadcov {

struct AssociationOutcome {
  Tier tier = Tier::uav;
  LinkState los_state = LinkState::not_applicable;
  double serving_distance = 0.0;  // r1 (3-D) for UAV, nearest contender AP distance for AP
  std::vector<NodeId> serving_node_ids;
  double nearest_uav_distance = 0.0;  // 3-D, 0 if no UAV tier
  LinkState nearest_uav_state = LinkState::not_applicable;
  double nearest_ap_distance = 0.0;   // along the typical road, among contender layers
  std::vector<double> layer_distances;  // nearest AP of each layer on the typical road
};

/// Biased max-power association of the typical user. Throws ResampleError
/// when a required candidate set is empty. Ties go to the UAV tier.
AssociationOutcome associate(const NetworkSnapshot& snapshot, const SystemParams& params,
                             SpectrumMode mode = SpectrumMode::shared);

// --- distance laws of the nearest candidates ---------------------------------

template <class Scalar>
Scalar nearest_uav_distance_pdf(Scalar r1, Scalar lambda_u, Scalar altitude) {
  using std::exp;
  if (r1 < altitude) return Scalar(0);
  const Scalar pi = Scalar(std::numbers::pi);
  return Scalar(2) * pi * lambda_u * r1 * exp(-lambda_u * pi * (r1 * r1 - altitude * altitude));
}

template <class Scalar>
Scalar nearest_uav_distance_cdf(Scalar r1, Scalar lambda_u, Scalar altitude) {
  using std::expm1;
  if (r1 <= altitude) return Scalar(0);
  return -expm1(-lambda_u * Scalar(std::numbers::pi) * (r1 * r1 - altitude * altitude));
}

template <class Scalar>
Scalar nearest_ap_distance_pdf(Scalar r2, Scalar lambda_a) {
  using std::exp;
  if (r2 < Scalar(0)) return Scalar(0);
  return Scalar(2) * lambda_a * exp(Scalar(-2) * lambda_a * r2);
}

template <class Scalar>
Scalar nearest_ap_distance_cdf(Scalar r2, Scalar lambda_a) {
  using std::expm1;
  if (r2 <= Scalar(0)) return Scalar(0);
  return -expm1(Scalar(-2) * lambda_a * r2);
}

// --- analytical association --------------------------------------------------

/// Retained UAV intensity used by the analytical backend.
double uav_intensity(const SystemParams& params);

/// rho(r2) = max(0, xi21^{-2/alpha_v} r2^{2 alpha_a / alpha_v} - H_U^2)
double exclusion_area_term(double r2, LinkState v, const SystemParams& params);

/// Smallest UAV 3-D distance compatible with AP association at AP distance r2.
double uav_exclusion_radius(double r2, LinkState v, const SystemParams& params);

/// P(R2 > xi21^{1/alpha_a} r^{alpha_v/alpha_a}): the UAV at 3-D distance r beats every AP.
double uav_wins_given_distance(double r, LinkState v, const SystemParams& params);

/// A_v^1: probability the v-state UAV link beats the strongest AP.
double tier1_conditional_assoc_prob(LinkState v, const SystemParams& params);

/// A_L: LoS probability of the nearest-UAV link.
double aerial_los_assoc_prob(const SystemParams& params);

/// (P(E1), P(E2)).
std::pair<double, double> event_probabilities(const SystemParams& params);

/// f_R(r | A_v^1), r >= H_U.
double serving_pdf_given_uav(double r, LinkState v, const SystemParams& params);

/// f_R(r | A_v^2), r >= 0.
double serving_pdf_given_ap(double r, LinkState v, const SystemParams& params);

/// CDFs obtained by integrating the conditional PDFs.
double serving_cdf_given_uav(double r, LinkState v, const SystemParams& params);
double serving_cdf_given_ap(double r, LinkState v, const SystemParams& params);

}  // namespace roadcov
