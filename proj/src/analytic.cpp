#include "roadcov/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "roadcov/association.hpp"
#include "roadcov/errors.hpp"
#include "roadcov/point_processes.hpp"
#include "roadcov/propagation.hpp"

namespace roadcov {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

DerivativeArray zeros(int order) { return DerivativeArray::Zero(order + 1); }

QuadratureOptions tolerance(const AnalyticOptions& opts, double tighten, const char* label) {
  QuadratureOptions q;
  q.rel_tol = opts.rel_tol * tighten;
  q.abs_tol = opts.abs_tol * tighten;
  q.label = label;
  return q;
}

// Adds weight * O_k for k = 0..order, the scaled derivative stack of
// 1 - (1 + x)^{-m} with x = s c / m:
//   O_0 = 1 - (1 + x)^{-m}
//   O_k = -s^k d^k/ds^k (1 + x)^{-m} = (-1)^{k+1} m (m+1)...(m+k-1) (x / (1 + x))^k (1 + x)^{-m}
void add_outage(DerivativeArray& out, double weight, double x, int m) {
  const double log1p_x = std::log1p(x);
  out(0) += weight * -std::expm1(-m * log1p_x);
  const Eigen::Index order = out.size() - 1;
  if (order == 0) return;
  const double ratio = 1.0 / (1.0 + 1.0 / x);
  double term = std::exp(-m * log1p_x);
  double rising = 1.0;
  double sign = 1.0;
  for (Eigen::Index k = 1; k <= order; ++k) {
    rising *= static_cast<double>(m + k - 1);
    term *= ratio;
    out(k) += weight * sign * rising * term;
    sign = -sign;
  }
}

// Integral over [lo, hi] (hi may be infinite) split at the given kinks and at
// octave-spaced points above first_scale, so each panel spans one scale.
template <class F>
DerivativeArray radial_integral(F&& f, double lo, double hi, std::vector<double> kinks,
                                double first_scale, const QuadratureOptions& q) {
  const bool finite = std::isfinite(hi);
  const double cap = finite ? hi : 64.0 * std::max(lo, first_scale);
  std::vector<double> bps = std::move(kinks);
  for (double g = lo > 0.0 ? 2.0 * lo : first_scale; g < cap; g *= 2.0) bps.push_back(g);
  if (!finite) bps.push_back(cap);
  bps.erase(std::remove_if(bps.begin(), bps.end(), [&](double b) { return !(b > lo && b < hi); }),
            bps.end());
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  bps.insert(bps.begin(), lo);
  if (finite) bps.push_back(hi);

  DerivativeArray total = integrate(f, bps, q).value;
  if (!finite) total += integrate_to_infinity(f, bps.back(), bps.back(), q).value;
  return total;
}

double sort_scale(double s, double power, int m, double alpha) {
  // distance at which s * power * r^-alpha / m = 1
  if (!(s > 0.0)) return 1.0;
  return std::pow(s * power / m, 1.0 / alpha);
}

int interferer_order_nlos(const SystemParams& p) {
  return p.options.interferer_order == InterfererOrder::per_state ? p.channel.m_NL : p.channel.m_L;
}

DerivativeArray log_i1_ppp(double s, int order, const SystemParams& p, double lower,
                           const AnalyticOptions& opts) {
  const auto& ch = p.channel;
  const double H = ch.H_U;
  const double lambda_u = uav_intensity(p);
  const double lo = std::max(H, lower);
  const double hi = std::isfinite(p.window_radius)
                        ? std::sqrt(p.window_radius * p.window_radius + H * H)
                        : kInf;
  if (!(hi > lo)) return zeros(order);
  const int m_los = ch.m_L;
  const int m_nlos = interferer_order_nlos(p);
  const double power = p.power.P_U * ch.g_U;
  auto integrand = [&](double u) {
    DerivativeArray out = zeros(order);
    const double z = std::sqrt(std::max(0.0, u * u - H * H));
    const double p_los = los_probability(z, ch);
    add_outage(out, p_los * u, s * power * std::pow(u, -ch.alpha_L) / m_los, m_los);
    add_outage(out, (1.0 - p_los) * u, s * power * std::pow(u, -ch.alpha_NL) / m_nlos, m_nlos);
    return out;
  };
  const std::vector<double> kinks = {sort_scale(s, power, m_los, ch.alpha_L),
                                     sort_scale(s, power, m_nlos, ch.alpha_NL)};
  const DerivativeArray integral =
      radial_integral(integrand, lo, hi, kinks, H, tolerance(opts, 1.0, "laplace_i1_ppp"));
  return -2.0 * kPi * lambda_u * integral;
}

DerivativeArray log_i1_mhc(double s, double r, int order, const SystemParams& p,
                           const AnalyticOptions& opts) {
  const auto& ch = p.channel;
  const double H = ch.H_U;
  require(r >= H, "laplace_i1_mhc: serving distance must be at least the altitude");
  const double x = std::sqrt(std::max(0.0, r * r - H * H));
  const double R = p.window_radius;
  const bool finite = std::isfinite(R);
  if (finite && x >= R) return zeros(order);

  const double lambda_u = uav_intensity(p);
  const double d = p.mhc.d;
  const double lambda_p = mhc_parent_intensity(lambda_u, d);
  const double power = p.power.P_U * ch.g_U;
  const int m_los = ch.m_L;
  const int m_nlos = ch.m_NL;
  const QuadratureOptions inner_q = tolerance(opts, 0.1, "laplace_i1_mhc (radial)");

  auto angular = [&](double theta) {
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    const double v_min = std::max(d, 2.0 * x * c);
    const double v_max = finite ? x * c + std::sqrt(std::max(0.0, R * R - x * x * sn * sn)) : kInf;
    if (!(v_max > v_min)) return zeros(order);
    auto radial = [&](double v) {
      DerivativeArray out = zeros(order);
      const double zeta = second_order_density(v, lambda_p, d);
      if (zeta == 0.0) return out;
      const double y2 = std::max(0.0, x * x + v * v - 2.0 * x * v * c);
      const double l2 = y2 + H * H;
      const double p_los = los_probability(std::sqrt(y2), ch);
      const double w = zeta * v;
      add_outage(out, p_los * w, s * power * std::pow(l2, -0.5 * ch.alpha_L) / m_los, m_los);
      add_outage(out, (1.0 - p_los) * w, s * power * std::pow(l2, -0.5 * ch.alpha_NL) / m_nlos,
                 m_nlos);
      return out;
    };
    return radial_integral(radial, v_min, v_max, {2.0 * d}, d, inner_q);
  };

  std::vector<double> bps = {0.0, 0.5 * kPi, kPi};
  if (x > 0.0) {
    bps.push_back(std::acos(std::min(1.0, d / x)));          // 2x cos(theta) = 2d
    bps.push_back(std::acos(std::min(1.0, d / (2.0 * x))));  // 2x cos(theta) = d
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  const DerivativeArray outer =
      integrate(angular, bps, tolerance(opts, 1.0, "laplace_i1_mhc (angular)")).value;
  // theta and -theta contribute equally
  return -(2.0 / lambda_u) * outer;
}

DerivativeArray log_i2_uav_served(double s, int order, const SystemParams& p,
                                  const AnalyticOptions& opts) {
  if (p.lambda_l == 0.0) return zeros(order);
  const auto& ch = p.channel;
  const double power = p.power.P_a * ch.g_a;
  const int m = ch.m_22;
  auto integrand = [&](double r) {
    DerivativeArray out = zeros(order);
    add_outage(out, r, s * power * std::pow(r, -ch.alpha_a) / m, m);
    return out;
  };
  const double scale = sort_scale(s, power, m, ch.alpha_a);
  const DerivativeArray integral =
      radial_integral(integrand, 0.0, p.window_radius, {scale}, std::min(scale, 1.0),
                      tolerance(opts, 1.0, "laplace_i2_uav_served"));
  return -2.0 * kPi * kPi * p.lambda_l * p.lambda_a_total() * integral;
}

DerivativeArray log_i2_ap_served(double s, int order, const SystemParams& p,
                                 const AnalyticOptions& opts) {
  if (p.lambda_l == 0.0) return zeros(order);
  const auto& ch = p.channel;
  const double power = p.power.P_a * ch.g_a;
  const int m = ch.m_22;
  const double R = p.window_radius;
  const bool finite = std::isfinite(R);
  const double scale = sort_scale(s, power, m, ch.alpha_a);
  const QuadratureOptions inner_q = tolerance(opts, 0.1, "laplace_i2_ap_served (along road)");

  auto per_offset = [&](double y) {
    const double half = finite ? std::sqrt(std::max(0.0, R * R - y * y)) : kInf;
    DerivativeArray along = zeros(order);
    if (half > 0.0) {
      auto integrand = [&](double xr) {
        DerivativeArray out = zeros(order);
        add_outage(out, 1.0, s * power * std::pow(xr * xr + y * y, -0.5 * ch.alpha_a) / m, m);
        return out;
      };
      along = radial_integral(integrand, 0.0, half, {scale}, std::max({y, std::min(scale, 1.0)}),
                              inner_q);
    }
    DerivativeArray out = zeros(order);
    for (double lambda_a : p.lambda_a) {
      const DerivativeArray g = -2.0 * lambda_a * along;
      const DerivativeArray e = exp_derivatives(g);
      out(0) += -std::expm1(g(0));
      for (Eigen::Index k = 1; k <= order; ++k) out(k) -= e(k);
    }
    return out;
  };
  const DerivativeArray integral =
      radial_integral(per_offset, 0.0, R, {scale}, std::min(scale, 1.0),
                      tolerance(opts, 1.0, "laplace_i2_ap_served (offset)"));
  return -2.0 * kPi * p.lambda_l * integral;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::string_view to_string(LaplaceScenario scenario) {
  switch (scenario) {
    case LaplaceScenario::uav_served_i1_mhc: return "uav_served_i1_mhc";
    case LaplaceScenario::uav_served_i2_all_aps: return "uav_served_i2_all_aps";
    case LaplaceScenario::ap_served_i1_ppp: return "ap_served_i1_ppp";
    case LaplaceScenario::ap_served_i2_other_lines: return "ap_served_i2_other_lines";
  }
  return "?";
}

LaplaceScenario laplace_scenario_from_string(std::string_view text) {
  for (auto sc : {LaplaceScenario::uav_served_i1_mhc, LaplaceScenario::uav_served_i2_all_aps,
                  LaplaceScenario::ap_served_i1_ppp, LaplaceScenario::ap_served_i2_other_lines})
    if (to_string(sc) == text) return sc;
  throw ParameterError("unknown Laplace scenario '" + std::string(text) + "'");
}

bool scenario_active(const LaplaceSpec& spec) {
  switch (spec.spectrum_mode) {
    case SpectrumMode::shared: return true;
    case SpectrumMode::orthogonal:
      return spec.scenario == LaplaceScenario::uav_served_i1_mhc ||
             spec.scenario == LaplaceScenario::ap_served_i2_other_lines;
    case SpectrumMode::ap_only: return spec.scenario == LaplaceScenario::ap_served_i2_other_lines;
  }
  return true;
}

DerivativeArray exp_derivatives(const DerivativeArray& x) {
  const Eigen::Index n = x.size() - 1;
  DerivativeArray bell(n + 1);
  bell(0) = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double acc = 0.0;
    double binom = 1.0;
    for (Eigen::Index i = 0; i <= j; ++i) {
      acc += binom * bell(j - i) * x(i + 1);
      binom = binom * static_cast<double>(j - i) / static_cast<double>(i + 1);
    }
    bell(j + 1) = acc;
  }
  return std::exp(x(0)) * bell;
}

DerivativeArray log_laplace_derivatives(const LaplaceSpec& spec, double s, int order,
                                        const SystemParams& params, const AnalyticOptions& opts) {
  require(s >= 0.0, "Laplace transform argument s must be non-negative");
  require(order >= 0 && order <= kMaxDerivativeOrder, "derivative order outside [0, 8]");
  require(order == 0 || s > 0.0, "derivatives need s > 0");
  if (!scenario_active(spec) || s == 0.0) return zeros(order);
  switch (spec.scenario) {
    case LaplaceScenario::uav_served_i1_mhc:
      return log_i1_mhc(s, spec.conditioning_distance, order, params, opts);
    case LaplaceScenario::uav_served_i2_all_aps: return log_i2_uav_served(s, order, params, opts);
    case LaplaceScenario::ap_served_i1_ppp:
      return log_i1_ppp(s, order, params, spec.conditioning_distance, opts);
    case LaplaceScenario::ap_served_i2_other_lines: return log_i2_ap_served(s, order, params, opts);
  }
  return zeros(order);
}

double laplace_transform(const LaplaceSpec& spec, double s, const SystemParams& params,
                         const AnalyticOptions& opts) {
  return std::exp(log_laplace_derivatives(spec, s, 0, params, opts)(0));
}

double laplace_i1_mhc(double s, double r, const SystemParams& params, const AnalyticOptions& opts) {
  return laplace_transform({LaplaceScenario::uav_served_i1_mhc, r, SpectrumMode::shared}, s, params,
                           opts);
}

double laplace_i1_ppp(double s, const SystemParams& params, double lower_limit,
                      const AnalyticOptions& opts) {
  return laplace_transform({LaplaceScenario::ap_served_i1_ppp, lower_limit, SpectrumMode::shared},
                           s, params, opts);
}

double laplace_i2_uav_served(double s, const SystemParams& params, const AnalyticOptions& opts) {
  return laplace_transform({LaplaceScenario::uav_served_i2_all_aps, 0.0, SpectrumMode::shared}, s,
                           params, opts);
}

double laplace_i2_ap_served(double s, const SystemParams& params, const AnalyticOptions& opts) {
  return laplace_transform({LaplaceScenario::ap_served_i2_other_lines, 0.0, SpectrumMode::shared},
                           s, params, opts);
}

std::vector<double> laplace_derivatives(const LaplaceSpec& spec, double s, int order,
                                        const SystemParams& params, const AnalyticOptions& opts) {
  DerivativeArray x = log_laplace_derivatives(spec, s, order, params, opts);
  x(0) -= s * params.power.sigma2;
  if (order >= 1) x(1) -= s * params.power.sigma2;
  const DerivativeArray scaled = exp_derivatives(x);
  std::vector<double> out(static_cast<std::size_t>(order) + 1);
  double s_power = 1.0;
  for (int k = 0; k <= order; ++k) {
    out[k] = scaled(k) / s_power;
    s_power *= s;
  }
  return out;
}

double laplace_scale(const LaplaceSpec& spec, const SystemParams& params,
                     const AnalyticOptions& opts) {
  // bisection on log s for log L(s) = -1
  auto excess = [&](double log_s) {
    return log_laplace_derivatives(spec, std::exp(log_s), 0, params, opts)(0) + 1.0;
  };
  double lo = std::log(1e-12);
  double hi = std::log(1e18);
  if (excess(lo) < 0.0 || excess(hi) > 0.0)
    throw NumericError("laplace_scale: transform does not cross 1/e on the search range");
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

GammaMatch gamma_moment_match(std::span<const double> shapes, std::span<const double> scales) {
  require(!shapes.empty() && shapes.size() == scales.size(),
          "gamma_moment_match: need equal-length, non-empty lists");
  double mean = 0.0;
  double variance = 0.0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    require(shapes[i] > 0.0 && scales[i] > 0.0, "gamma_moment_match: entries must be positive");
    mean += shapes[i] * scales[i];
    variance += shapes[i] * scales[i] * scales[i];
  }
  GammaMatch g;
  if (std::all_of(scales.begin(), scales.end(), [&](double t) { return t == scales.front(); })) {
    // common scale: the sum is exactly gamma, skip the rounding in mean^2 / var
    g.k_S = std::accumulate(shapes.begin(), shapes.end(), 0.0);
    g.theta_S = scales.front();
  } else {
    g.k_S = mean * mean / variance;
    g.theta_S = variance / mean;
  }
  g.eta = std::exp(-std::lgamma(g.k_S + 1.0) / g.k_S) / g.theta_S;
  g.k_rounded = std::max(1, static_cast<int>(std::lround(g.k_S)));
  return g;
}

CoverageBreakdown coverage_breakdown(double gamma0, const SystemParams& p, SpectrumMode mode,
                                     const AnalyticOptions& opts) {
  p.validate();
  require(gamma0 > 0.0, "coverage_probability: threshold must be positive");
  const auto& ch = p.channel;
  const auto& pw = p.power;
  CoverageBreakdown out;

  const std::vector<double> shapes(p.lambda_a.size(), static_cast<double>(ch.m_21));
  const std::vector<double> scales(p.lambda_a.size(), 1.0 / ch.m_21);
  out.gamma = gamma_moment_match(shapes, scales);
  if (std::abs(out.gamma.k_S - out.gamma.k_rounded) > 1e-12) {
    std::ostringstream note;
    note << "k_S = " << out.gamma.k_S << " rounded to " << out.gamma.k_rounded;
    out.notes.push_back(note.str());
  }

  // AP-served coverage for a given UAV exclusion radius (0 = altitude)
  AnalyticOptions ap_opts = opts;
  ap_opts.rel_tol = std::min(opts.rel_tol, 1e-9);
  auto ap_coverage = [&](double exclusion) {
    const int k = out.gamma.k_rounded;
    double total = 0.0;
    for (int n = 1; n <= k; ++n) {
      const double s = n * out.gamma.eta * gamma0 / (pw.C * ch.G_a);
      double log_l = -s * pw.sigma2;
      log_l += log_laplace_derivatives({LaplaceScenario::ap_served_i1_ppp, exclusion, mode}, s, 0,
                                       p, ap_opts)(0);
      log_l += log_laplace_derivatives({LaplaceScenario::ap_served_i2_other_lines, 0.0, mode}, s,
                                       0, p, ap_opts)(0);
      total += (n % 2 == 1 ? 1.0 : -1.0) * binomial(k, n) * std::exp(log_l);
    }
    return total;
  };

  if (mode == SpectrumMode::ap_only) {
    out.ap_conditional = ap_coverage(0.0);
    out.ap = out.ap_conditional;
    out.raw = out.ap;
  } else {
    const double lambda_u = uav_intensity(p);
    const double H = ch.H_U;
    out.a_los = aerial_los_assoc_prob(p);
    out.a1_los = tier1_conditional_assoc_prob(LinkState::los, p);
    out.a1_nlos = tier1_conditional_assoc_prob(LinkState::nlos, p);
    const bool marginal = p.options.los_weighting == LosWeighting::marginal;
    const double r_top = std::min(std::sqrt(p.window_radius * p.window_radius + H * H),
                                  std::sqrt(H * H + 40.0 / (kPi * lambda_u)));

    QuadratureOptions outer_q;
    outer_q.rel_tol = 1e-6;
    outer_q.abs_tol = 1e-9;
    outer_q.label = "coverage (serving distance)";
    std::vector<double> r_bps = {H};
    for (double r = 1.25 * H; r < r_top; r *= 1.25) r_bps.push_back(r);
    r_bps.push_back(r_top);

    const double q_common =
        p.options.uav_exclusion == UavExclusion::altitude ? ap_coverage(0.0) : 0.0;
    out.ap_conditional = q_common;

    for (LinkState v : {LinkState::los, LinkState::nlos}) {
      const double a_v = v == LinkState::los ? out.a_los : 1.0 - out.a_los;
      const double a1 = v == LinkState::los ? out.a1_los : out.a1_nlos;
      const int m_v = p.m_uav(v);
      const double alpha_v = p.alpha_uav(v);
      auto state_prob = [&](double r) {
        if (marginal) return a_v;
        const double pl = los_probability(std::sqrt(std::max(0.0, r * r - H * H)), ch);
        return v == LinkState::los ? pl : 1.0 - pl;
      };

      auto uav_integrand = [&](double r) {
        const double weight = state_prob(r) * nearest_uav_distance_pdf(r, lambda_u, H) *
                              uav_wins_given_distance(r, v, p);
        if (weight == 0.0) return 0.0;
        const double s = m_v * gamma0 * std::pow(r, alpha_v) / (pw.P_U * ch.G_U);
        DerivativeArray x = log_laplace_derivatives(
            {LaplaceScenario::uav_served_i1_mhc, r, mode}, s, m_v - 1, p, opts);
        x += log_laplace_derivatives({LaplaceScenario::uav_served_i2_all_aps, 0.0, mode}, s,
                                     m_v - 1, p, opts);
        x(0) -= s * pw.sigma2;
        if (m_v > 1) x(1) -= s * pw.sigma2;
        const DerivativeArray e = exp_derivatives(x);
        double cov = 0.0;
        for (int k = 0; k < m_v; ++k) cov += (k % 2 == 0 ? 1.0 : -1.0) * e(k) / factorial(k);
        return weight * cov;
      };
      const double uav_term = integrate(uav_integrand, r_bps, outer_q).value;

      double ap_weight = 0.0;
      if (marginal) {
        ap_weight = a_v * (1.0 - a1);
      } else {
        auto w = [&](double r) {
          return state_prob(r) * nearest_uav_distance_pdf(r, lambda_u, H) *
                 (1.0 - uav_wins_given_distance(r, v, p));
        };
        ap_weight = integrate(w, r_bps, outer_q).value;
      }

      double q_v = q_common;
      if (p.options.uav_exclusion == UavExclusion::association) {
        auto conditional = [&](double r2) {
          return serving_pdf_given_ap(r2, v, p) * ap_coverage(uav_exclusion_radius(r2, v, p));
        };
        const double lambda_c = p.lambda_a_contender();
        q_v = integrate_to_infinity(conditional, 0.0, 1.0 / (2.0 * lambda_c), outer_q).value;
        out.ap_conditional += a_v * (1.0 - a1) * q_v;
      }

      (v == LinkState::los ? out.uav_los : out.uav_nlos) = uav_term;
      out.ap += ap_weight * q_v;
    }
    out.raw = out.uav_los + out.uav_nlos + out.ap;
  }

  out.probability = std::clamp(out.raw, 0.0, 1.0);
  if (out.probability != out.raw) {
    out.clamped = true;
    std::ostringstream note;
    note << "coverage " << out.raw << " clamped to [0, 1]";
    out.notes.push_back(note.str());
  }
  return out;
}

double coverage_probability(double gamma0, const SystemParams& params, SpectrumMode mode,
                            const AnalyticOptions& opts) {
  return coverage_breakdown(gamma0, params, mode, opts).probability;
}

}  // namespace roadcov
