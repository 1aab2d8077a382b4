#include "roadcov/params.hpp"

#include <cmath>
#include <string>

#include "roadcov/point_processes.hpp"

namespace roadcov {

double MhcParams::lambda_p() const {
  return lambda_p_override ? *lambda_p_override : mhc_parent_intensity(lambda_u, d);
}

void SystemParams::validate() const {
  require(mhc.lambda_u > 0.0, "lambda_u must be positive");
  require(mhc.d > 0.0, "safety distance d must be positive");
  mhc.lambda_p();
  if (mhc.lambda_p_override) require(*mhc.lambda_p_override > 0.0, "parent intensity must be positive");
  require(lambda_l >= 0.0, "line density must be non-negative");
  require(!lambda_a.empty(), "at least one AP layer is required");
  for (double l : lambda_a) require(l > 0.0, "AP layer densities must be positive");
  require(channel.alpha_a >= 2.0, "alpha_a must be at least 2");
  require(channel.alpha_L > 0.0 && channel.alpha_NL > 0.0, "UAV path-loss exponents must be positive");
  require(channel.m_L >= 1 && channel.m_NL >= 1 && channel.m_21 >= 1 && channel.m_22 >= 1,
          "Nakagami orders must be integers >= 1");
  require(channel.G_U > 0.0 && channel.g_U > 0.0 && channel.G_a > 0.0 && channel.g_a > 0.0,
          "antenna gains must be positive");
  require(channel.H_U > 0.0, "UAV altitude must be positive");
  require(channel.a >= 0.0 && channel.b >= 0.0, "LoS constants must be non-negative");
  require(power.P_U > 0.0 && power.P_a > 0.0 && power.C > 0.0, "powers must be positive");
  require(power.sigma2 >= 0.0, "noise power must be non-negative");
  require(power.B_U > 0.0 && power.B_a > 0.0, "biases must be positive");
  require(window_radius > mhc.d, "window radius must exceed the safety distance");
}

std::string_view to_string(SpectrumMode mode) {
  switch (mode) {
    case SpectrumMode::shared: return "shared";
    case SpectrumMode::orthogonal: return "orthogonal";
    case SpectrumMode::ap_only: return "ap_only";
  }
  return "?";
}

std::string_view to_string(Tier tier) { return tier == Tier::uav ? "uav" : "ap"; }

std::string_view to_string(LinkState state) {
  switch (state) {
    case LinkState::los: return "los";
    case LinkState::nlos: return "nlos";
    case LinkState::not_applicable: return "n/a";
  }
  return "?";
}

SpectrumMode spectrum_mode_from_string(std::string_view text) {
  if (text == "shared") return SpectrumMode::shared;
  if (text == "orthogonal") return SpectrumMode::orthogonal;
  if (text == "ap_only") return SpectrumMode::ap_only;
  throw ParameterError("unknown spectrum mode '" + std::string(text) + "'");
}

}  // namespace roadcov
