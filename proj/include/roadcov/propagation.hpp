#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "roadcov/errors.hpp"
#include "roadcov/params.hpp"
#include "roadcov/rng.hpp"

namespace roadcov {

/// LoS probability of an air-to-ground link at horizontal distance z:
/// 1 / (1 + a exp(-b (theta_deg - a))) with theta the elevation angle in degrees.
template <class Scalar>
Scalar los_probability(Scalar z, Scalar altitude, Scalar a, Scalar b) {
  using std::atan2;
  using std::exp;
  if (z < Scalar(0)) throw ParameterError("los_probability: horizontal distance must be >= 0");
  const Scalar elevation_deg = Scalar(180.0 / std::numbers::pi) * atan2(altitude, z);
  return Scalar(1) / (Scalar(1) + a * exp(-b * (elevation_deg - a)));
}

inline double los_probability(double z, const ChannelParams& ch) {
  return los_probability(z, ch.H_U, ch.a, ch.b);
}

inline double nlos_probability(double z, const ChannelParams& ch) {
  return 1.0 - los_probability(z, ch);
}

/// Limit of the LoS probability as the horizontal distance grows without bound.
inline double los_probability_floor(const ChannelParams& ch) {
  return 1.0 / (1.0 + ch.a * std::exp(ch.a * ch.b));
}

/// Unit-mean Nakagami-m power gain: Gamma(shape m, scale 1/m).
inline double sample_nakagami_power(int m, Philox4x32& rng) {
  if (m < 1) throw ParameterError("sample_nakagami_power: order must be >= 1");
  std::gamma_distribution<double> gain(static_cast<double>(m), 1.0 / m);
  return gain(rng);
}

/// P G h r^-alpha
template <class Scalar>
Scalar received_power(Scalar P, Scalar G, Scalar h, Scalar r, Scalar alpha) {
  using std::pow;
  if (!(r > Scalar(0))) throw ParameterError("received_power: distance must be positive");
  return P * G * h * pow(r, -alpha);
}

/// Distance-compensating AP transmit power C r^alpha_a.
template <class Scalar>
Scalar power_controlled_ap_power(Scalar C, Scalar r, Scalar alpha_a) {
  using std::pow;
  if (!(r > Scalar(0))) throw ParameterError("power_controlled_ap_power: distance must be positive");
  return C * pow(r, alpha_a);
}

}  // namespace roadcov
