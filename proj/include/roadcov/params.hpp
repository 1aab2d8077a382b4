#pragma once

#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roadcov/errors.hpp"

namespace roadcov {

/// Retained intensity and hard-core distance of a Matern Type-II field.
struct MhcParams {
  double lambda_u = 1e-5;  // retained points per m^2
  double d = 100.0;        // safety distance, m
  /// Parent intensity used by the sampler instead of the one implied by lambda_u.
  std::optional<double> lambda_p_override;

  /// Parent intensity that thins to lambda_u; throws if lambda_u >= 1 / (pi d^2).
  double lambda_p() const;
};

/// Air-to-ground LoS model, path loss, Nakagami orders and antenna gains.
struct ChannelParams {
  double a = 12.08;
  double b = 0.11;
  double alpha_L = 2.0;
  double alpha_NL = 3.0;
  double alpha_a = 3.0;
  int m_L = 3;
  int m_NL = 3;
  int m_21 = 3;  // APs on the user's own road
  int m_22 = 3;  // APs on every other road
  double G_U = 1.0;
  double g_U = 1.0;
  double G_a = 1.0;
  double g_a = 1.0;
  double H_U = 100.0;  // m
};

/// Transmit powers, power-control constant, noise and selection biases (SI, linear).
struct PowerParams {
  double P_U = 1.0;     // W (30 dBm)
  double P_a = 0.19952623149688797;  // W (23 dBm)
  double C = 1e-7;      // W m^-alpha_a
  double sigma2 = 3.981071705534972e-13;  // W (-94 dBm)
  double B_U = 1.0;
  double B_a = 1.0;
};

enum class SpectrumMode { shared, orthogonal, ap_only };
enum class Tier { uav, ap };
enum class LinkState { los, nlos, not_applicable };

/// Which access points contend with the UAV tier in the biased comparison.
enum class AssociationContender { all_layers, first_layer };

/// Lower radial limit of the unconditioned UAV interference seen by an
/// AP-served user: the UAV altitude, or the association exclusion radius
/// implied by the serving AP distance.
enum class UavExclusion { altitude, association };

/// Nakagami order used in the AP-served UAV interference transform.
enum class InterfererOrder { per_state, los_order };

/// Spatial law used by the simulator for the UAV tier.
enum class UavField { matern, poisson };

/// How the LoS state of the serving UAV enters the analytical coverage.
///   marginal:   weight each branch by the marginal A_v (the closed form)
///   distance:   weight by p_v at the serving distance inside the r-integral
enum class LosWeighting { marginal, distance };

struct ModelOptions {
  AssociationContender contender = AssociationContender::all_layers;
  UavExclusion uav_exclusion = UavExclusion::altitude;
  InterfererOrder interferer_order = InterfererOrder::per_state;
  UavField uav_field = UavField::matern;
  LosWeighting los_weighting = LosWeighting::marginal;
};

/// Full scenario configuration in SI units.
struct SystemParams {
  MhcParams mhc;
  double lambda_l = 0.01 / std::numbers::pi;  // lines per (m x rad) in representation space
  std::vector<double> lambda_a = {0.002, 0.002, 0.002};  // per-layer AP density, per m
  ChannelParams channel;
  PowerParams power;
  double window_radius = 2000.0;  // m, shared by both backends
  ModelOptions options;

  int layers() const { return static_cast<int>(lambda_a.size()); }
  double lambda_a_total() const { return std::accumulate(lambda_a.begin(), lambda_a.end(), 0.0); }
  /// Density of the APs competing with the UAV tier on the user's road.
  double lambda_a_contender() const {
    return options.contender == AssociationContender::all_layers ? lambda_a_total()
                                                                 : lambda_a.front();
  }
  /// xi_21 = (P_a B_a G_a) / (P_U B_U G_U)
  double xi21() const {
    return (power.P_a * power.B_a * channel.G_a) / (power.P_U * power.B_U * channel.G_U);
  }
  double alpha_uav(LinkState v) const {
    return v == LinkState::los ? channel.alpha_L : channel.alpha_NL;
  }
  int m_uav(LinkState v) const { return v == LinkState::los ? channel.m_L : channel.m_NL; }

  void validate() const;
};

std::string_view to_string(SpectrumMode mode);
std::string_view to_string(Tier tier);
std::string_view to_string(LinkState state);
SpectrumMode spectrum_mode_from_string(std::string_view text);

}  // namespace roadcov
