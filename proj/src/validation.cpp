#include "roadcov/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "roadcov/association.hpp"
#include "roadcov/point_processes.hpp"
#include "roadcov/quadrature.hpp"

namespace roadcov {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

}  // namespace

CheckResult check_mhc_intensity(const MhcParams& mhc, double window_radius, int realizations,
                                std::uint64_t seed) {
  std::vector<double> density;
  const double area = kPi * window_radius * window_radius;
  for (int i = 0; i < realizations; ++i) {
    Philox4x32 rng(seed, static_cast<std::uint64_t>(i), StreamTag::uav_field);
    density.push_back(static_cast<double>(sample_mhc2(mhc, window_radius, rng).size()) / area);
  }
  const MeanEstimate est = mean_estimate(density);
  CheckResult out{"mhc_intensity"};
  out.statistic = std::abs(est.mean - mhc.lambda_u) / est.std_error;
  out.limit = 3.0;
  out.pass = out.statistic <= out.limit;
  out.detail = fmt("empirical %.5g /km^2 vs %.5g /km^2", est.mean * 1e6, mhc.lambda_u * 1e6) +
               fmt(" (%.2f SE)", out.statistic);
  return out;
}

CheckResult check_mhc_min_distance(const MhcParams& mhc, double window_radius, int realizations,
                                   std::uint64_t seed) {
  double smallest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < realizations; ++i) {
    Philox4x32 rng(seed, static_cast<std::uint64_t>(i), StreamTag::uav_field);
    smallest = std::min(smallest, min_pairwise_distance(sample_mhc2(mhc, window_radius, rng)));
  }
  CheckResult out{"mhc_min_distance"};
  out.statistic = smallest;
  out.limit = mhc.d;
  out.pass = smallest >= mhc.d;
  out.detail = fmt("smallest separation %.4f m over %g realizations, d = %g m", smallest,
                   realizations, mhc.d);
  return out;
}

CheckResult check_pair_correlation(const MhcParams& mhc, double v_over_d, double window_radius,
                                   int realizations, std::uint64_t seed, double rel_tol) {
  const double d = mhc.d;
  const double v = v_over_d * d;
  const double half = 0.05 * d;
  const double lo = v - half, hi = v + half;
  const double lambda_u = mhc.lambda_u;
  const double lambda_p = mhc_parent_intensity(lambda_u, d);

  long references = 0, pairs = 0;
  const double inner = window_radius - hi;
  for (int i = 0; i < realizations; ++i) {
    Philox4x32 rng(seed, static_cast<std::uint64_t>(i), StreamTag::uav_field);
    const auto pts = sample_mhc2(mhc, window_radius, rng);
    for (std::size_t a = 0; a < pts.size(); ++a) {
      if (pts[a].head<2>().norm() > inner) continue;
      ++references;
      for (std::size_t b = 0; b < pts.size(); ++b) {
        if (a == b) continue;
        const double sep = (pts[a] - pts[b]).head<2>().norm();
        pairs += sep >= lo && sep < hi;
      }
    }
  }
  auto density = [&](double u) { return second_order_density(u, lambda_p, d) / lambda_u * 2.0 * kPi * u; };
  QuadratureOptions q;
  q.rel_tol = 1e-10;
  q.label = "pair correlation bin";
  const double expected = references * integrate(density, lo, hi, q).value;
  CheckResult out{"pair_correlation v/d=" + format_number(v_over_d)};
  out.statistic = std::abs(pairs / expected - 1.0);
  out.limit = rel_tol;
  out.pass = out.statistic <= rel_tol;
  out.detail = fmt("%g pairs vs %.1f expected", static_cast<double>(pairs), expected) +
               fmt(" (relative error %.4f, Poisson SE %.4f)", out.statistic,
                   1.0 / std::sqrt(std::max(1.0, expected)));
  return out;
}

CheckResult check_union_area(double v_over_d, double d, long darts, std::uint64_t seed,
                             double rel_tol) {
  const double v = v_over_d * d;
  Philox4x32 rng(seed, 0, StreamTag::generic);
  const double x0 = -d, width = v + 2.0 * d, height = 2.0 * d;
  long hits = 0;
  for (long i = 0; i < darts; ++i) {
    const double x = x0 + width * rng.uniform();
    const double y = -d + height * rng.uniform();
    hits += (x * x + y * y <= d * d) || ((x - v) * (x - v) + y * y <= d * d);
  }
  const double frac = static_cast<double>(hits) / darts;
  const double estimate = frac * width * height;
  const double exact = union_area(v, d);
  CheckResult out{"union_area v/d=" + format_number(v_over_d)};
  out.statistic = std::abs(estimate / exact - 1.0);
  out.limit = rel_tol;
  out.pass = out.statistic <= rel_tol;
  out.detail = fmt("dart estimate %.6g vs closed form %.6g (SE %.2g relative)", estimate, exact,
                   std::sqrt((1.0 - frac) / (frac * darts)));
  return out;
}

CheckResult check_association_probability(const SystemParams& params, const AssociationStats& st) {
  const double p_mc = st.freq_uav_los + st.freq_uav_nlos;
  const double se = std::sqrt(std::max(p_mc * (1.0 - p_mc), 1e-12) / st.n_trials);
  const double p_an = event_probabilities(params).first;
  CheckResult out{"association_probability"};
  out.statistic = std::abs(p_mc - p_an) / se;
  out.limit = 3.0;
  out.pass = out.statistic <= out.limit;
  out.detail = fmt("P(E1) analytic %.4f vs simulated %.4f (%.2f SE)", p_an, p_mc, out.statistic);
  return out;
}

std::vector<CheckResult> check_distance_laws(const SystemParams& params, const AssociationStats& st,
                                             double alpha) {
  const double lambda_u = uav_intensity(params);
  const double H = params.channel.H_U;
  struct Case {
    std::string name;
    const std::vector<double>* samples;
    std::function<double(double)> cdf;
  };
  const std::vector<Case> cases = {
      {"ks nearest_uav_distance", &st.nearest_uav,
       [&](double r) { return nearest_uav_distance_cdf(r, lambda_u, H); }},
      {"ks nearest_ap_distance", &st.nearest_ap,
       [&](double r) { return nearest_ap_distance_cdf(r, params.lambda_a_contender()); }},
      {"ks serving_distance|A_L^1", &st.serving_uav_los,
       [&](double r) { return serving_cdf_given_uav(r, LinkState::los, params); }},
      {"ks serving_distance|A_NL^1", &st.serving_uav_nlos,
       [&](double r) { return serving_cdf_given_uav(r, LinkState::nlos, params); }},
      {"ks serving_distance|A_L^2", &st.serving_ap_los,
       [&](double r) { return serving_cdf_given_ap(r, LinkState::los, params); }},
      {"ks serving_distance|A_NL^2", &st.serving_ap_nlos,
       [&](double r) { return serving_cdf_given_ap(r, LinkState::nlos, params); }},
  };
  std::vector<CheckResult> out;
  for (const auto& c : cases) {
    CheckResult r{c.name};
    r.limit = alpha;
    if (c.samples->size() < 50) {
      r.detail = "fewer than 50 samples";
      out.push_back(r);
      continue;
    }
    const KsResult ks = ks_test(*c.samples, c.cdf);
    r.statistic = ks.p_value;
    r.pass = ks.p_value >= alpha;
    r.detail = fmt("n = %g, D = %.4f, p = %.3g", static_cast<double>(ks.n), ks.statistic, ks.p_value);
    out.push_back(r);
  }
  return out;
}

std::vector<double> laplace_grid(const LaplaceSpec& spec, const SystemParams& params) {
  const double centre = laplace_scale(spec, params);
  std::vector<double> grid;
  for (int k = 0; k < 6; ++k) grid.push_back(centre * std::pow(10.0, -1.0 + 0.4 * k));
  return grid;
}

double conditioning_distance(const SystemParams& params) {
  const double H = params.channel.H_U;
  return std::sqrt(H * H + std::log(2.0) / (kPi * uav_intensity(params)));
}

CheckResult check_laplace(const SystemParams& params, const LaplaceSpec& spec, long n_trials,
                          std::uint64_t seed, int workers) {
  CheckResult out{"laplace " + std::string(to_string(spec.scenario))};
  const double at_zero = laplace_transform(spec, 0.0, params);
  const std::vector<double> zero{0.0};
  const double mc_zero = estimate_laplace(params, spec, zero, std::min(n_trials, 1000L), seed, workers)
                             .points.front()
                             .estimate.mean;
  const std::vector<double> grid = laplace_grid(spec, params);
  const LaplaceEstimate est = estimate_laplace(params, spec, grid, n_trials, seed, workers);
  int inside = 0;
  double worst = 0.0;
  std::ostringstream detail;
  detail << "L(0) = " << format_number(at_zero) << ", empirical " << format_number(mc_zero)
         << "; " << est.samples << " samples;";
  for (const auto& pt : est.points) {
    const double an = laplace_transform(spec, pt.s, params);
    const bool in = an >= pt.estimate.ci95.low && an <= pt.estimate.ci95.high;
    inside += in;
    worst = std::max(worst, std::abs(an - pt.estimate.mean) / std::max(pt.estimate.std_error, 1e-300));
    detail << fmt(" s=%.3g: %.4f vs %.4f", pt.s, an, pt.estimate.mean) << (in ? "" : "*");
  }
  out.statistic = worst;
  out.limit = 1.96;
  out.pass = at_zero == 1.0 && mc_zero == 1.0 && inside == static_cast<int>(grid.size());
  detail << fmt(" (%g/6 inside CI, worst %.1f SE)", inside, worst);
  out.detail = detail.str();
  return out;
}

CheckResult check_coverage(const SystemParams& params, SpectrumMode mode,
                           const std::vector<double>& thresholds_db, long n_trials,
                           std::uint64_t seed, int workers, double tolerance) {
  std::vector<double> linear;
  for (double db : thresholds_db) linear.push_back(db_to_linear(db));
  const CoverageCurve curve = estimate_coverage(params, mode, linear, n_trials, seed, workers);
  double worst = 0.0, worst_db = 0.0;
  for (std::size_t i = 0; i < linear.size(); ++i) {
    const double diff = std::abs(coverage_probability(linear[i], params, mode) - curve.points[i].coverage);
    if (diff > worst) worst = diff, worst_db = thresholds_db[i];
  }
  CheckResult out{"coverage " + std::string(to_string(mode))};
  out.statistic = worst;
  out.limit = tolerance;
  out.pass = worst <= tolerance;
  out.detail = fmt("max |analytic - simulated| = %.4f at %g dB over %g thresholds", worst, worst_db,
                   static_cast<double>(linear.size()));
  return out;
}

std::vector<CheckResult> validate_config(const ExperimentConfig& config) {
  const SystemParams& p = config.params;
  std::vector<CheckResult> out;
  out.push_back(check_mhc_intensity(p.mhc, p.window_radius, 200, config.seed));
  out.push_back(check_mhc_min_distance(p.mhc, p.window_radius, 200, config.seed));

  const AssociationStats st = empirical_association_stats(p, config.trials, config.seed, config.workers);
  out.push_back(check_association_probability(p, st));
  for (auto& c : check_distance_laws(p, st)) out.push_back(std::move(c));

  for (auto scenario : {LaplaceScenario::uav_served_i1_mhc, LaplaceScenario::uav_served_i2_all_aps,
                        LaplaceScenario::ap_served_i1_ppp, LaplaceScenario::ap_served_i2_other_lines}) {
    const bool conditioned = scenario == LaplaceScenario::uav_served_i1_mhc;
    const LaplaceSpec spec{scenario, conditioned ? conditioning_distance(p) : 0.0, SpectrumMode::shared};
    out.push_back(check_laplace(p, spec, conditioned ? 10 * config.trials : config.trials,
                                config.seed, config.workers));
  }
  for (SpectrumMode mode : config.spectrum_modes)
    out.push_back(check_coverage(p, mode, {0.0}, config.trials, config.seed, config.workers));
  return out;
}

std::string format_check(const CheckResult& check) {
  return std::string(check.pass ? "PASS" : "FAIL") + "  " + check.name + ": " + check.detail;
}

}  // namespace roadcov
