#pragma once

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

#include "roadcov/params.hpp"
#include "roadcov/quadrature.hpp"

namespace roadcov {

inline constexpr int kMaxDerivativeOrder = 8;

/// Derivative stack k = 0..order, stored without heap allocation.
using DerivativeArray =
    Eigen::Array<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDerivativeOrder + 1, 1>;

enum class LaplaceScenario {
  uav_served_i1_mhc,         // other UAVs, conditioned on the serving UAV distance
  uav_served_i2_all_aps,     // all APs, planar-PPP form
  ap_served_i1_ppp,          // all UAVs, unconditioned
  ap_served_i2_other_lines,  // APs on every road except the user's
};

struct LaplaceSpec {
  LaplaceScenario scenario = LaplaceScenario::uav_served_i1_mhc;
  /// Serving UAV distance for uav_served_i1_mhc; the UAV exclusion radius
  /// (3-D) for ap_served_i1_ppp, where 0 means the altitude.
  double conditioning_distance = 0.0;
  SpectrumMode spectrum_mode = SpectrumMode::shared;
};

std::string_view to_string(LaplaceScenario scenario);
LaplaceScenario laplace_scenario_from_string(std::string_view text);

/// False when the spectrum mode removes this interference term (its transform is 1).
bool scenario_active(const LaplaceSpec& spec);

/// Tolerances used by every transform evaluation.
struct AnalyticOptions {
  double rel_tol = 1e-7;
  double abs_tol = 1e-13;
};

double laplace_i1_mhc(double s, double r, const SystemParams& params, const AnalyticOptions& opts = {});
double laplace_i1_ppp(double s, const SystemParams& params, double lower_limit = 0.0,
                      const AnalyticOptions& opts = {});
double laplace_i2_uav_served(double s, const SystemParams& params, const AnalyticOptions& opts = {});
double laplace_i2_ap_served(double s, const SystemParams& params, const AnalyticOptions& opts = {});

double laplace_transform(const LaplaceSpec& spec, double s, const SystemParams& params,
                         const AnalyticOptions& opts = {});

/// s^k d^k/ds^k log L_I(s) for k = 0..order (k = 0 is log L_I itself). Needs s > 0 when order > 0.
DerivativeArray log_laplace_derivatives(const LaplaceSpec& spec, double s, int order,
                                        const SystemParams& params, const AnalyticOptions& opts = {});

/// d^k/ds^k [exp(-s sigma^2) L_I(s)] for k = 0..order.
std::vector<double> laplace_derivatives(const LaplaceSpec& spec, double s, int order,
                                        const SystemParams& params, const AnalyticOptions& opts = {});

/// Given x_k = s^k d^k/ds^k M(s), returns s^k d^k/ds^k exp(M(s)) via complete Bell polynomials.
DerivativeArray exp_derivatives(const DerivativeArray& scaled_log_derivatives);

/// The s at which L_I(s) = e^{-1}; a natural scale for probing a transform.
double laplace_scale(const LaplaceSpec& spec, const SystemParams& params,
                     const AnalyticOptions& opts = {});

struct GammaMatch {
  double k_S = 0.0;
  double theta_S = 0.0;
  double eta = 0.0;
  int k_rounded = 0;  // integer shape used by the alternating sum
};

/// Second-order moment match of a sum of independent Gamma(shape_i, scale_i).
GammaMatch gamma_moment_match(std::span<const double> shapes, std::span<const double> scales);

struct CoverageBreakdown {
  double probability = 0.0;  // clamped to [0, 1]
  double raw = 0.0;
  double uav_los = 0.0;    // weighted UAV-served contributions
  double uav_nlos = 0.0;
  double ap = 0.0;         // weighted AP-served contribution
  double ap_conditional = 0.0;
  double a_los = 0.0;
  double a1_los = 0.0;
  double a1_nlos = 0.0;
  GammaMatch gamma;
  bool clamped = false;
  std::vector<std::string> notes;
};

CoverageBreakdown coverage_breakdown(double gamma0, const SystemParams& params, SpectrumMode mode,
                                     const AnalyticOptions& opts = {});

double coverage_probability(double gamma0, const SystemParams& params, SpectrumMode mode,
                            const AnalyticOptions& opts = {});

}  // namespace roadcov
