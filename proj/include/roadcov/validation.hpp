#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roadcov/analytic.hpp"
#include "roadcov/config.hpp"
#include "roadcov/montecarlo.hpp"

namespace roadcov {

struct CheckResult {
  std::string name;
  bool pass = false;
  double statistic = 0.0;  // what was measured
  double limit = 0.0;      // bound it was held to
  std::string detail;
};

/// Mean retained intensity over independent Type-II fields vs lambda_u (3 SE),
/// plus the hard-core distance in every realization.
CheckResult check_mhc_intensity(const MhcParams& mhc, double window_radius, int realizations,
                                std::uint64_t seed);
CheckResult check_mhc_min_distance(const MhcParams& mhc, double window_radius, int realizations,
                                   std::uint64_t seed);

/// Empirical pair correlation in a bin around v vs the bin average of the
/// second-order density, relative tolerance `rel_tol`.
CheckResult check_pair_correlation(const MhcParams& mhc, double v_over_d, double window_radius,
                                   int realizations, std::uint64_t seed, double rel_tol = 0.05);

/// Dart-throwing estimate of the union area vs the closed form.
CheckResult check_union_area(double v_over_d, double d, long darts, std::uint64_t seed,
                             double rel_tol = 1e-3);

/// P(E1) vs the empirical UAV-association frequency within 3 SE.
CheckResult check_association_probability(const SystemParams& params, const AssociationStats& st);

/// KS tests of the nearest and conditional serving distances, significance alpha.
std::vector<CheckResult> check_distance_laws(const SystemParams& params, const AssociationStats& st,
                                             double alpha = 0.01);

/// Six-point log grid spanning a decade either side of the transform's 1/e point.
std::vector<double> laplace_grid(const LaplaceSpec& spec, const SystemParams& params);

/// Serving distance used to condition the MHC interference check: median of the nearest-UAV law.
double conditioning_distance(const SystemParams& params);

/// L(0) = 1 exactly and analytic values inside the 95% CI at each grid point.
CheckResult check_laplace(const SystemParams& params, const LaplaceSpec& spec, long n_trials,
                          std::uint64_t seed, int workers);

/// Largest |analytic - simulated| coverage over the thresholds.
CheckResult check_coverage(const SystemParams& params, SpectrumMode mode,
                           const std::vector<double>& thresholds_db, long n_trials,
                           std::uint64_t seed, int workers, double tolerance = 0.03);

/// The cross-backend oracle suite run by `validate`.
std::vector<CheckResult> validate_config(const ExperimentConfig& config);

std::string format_check(const CheckResult& check);

}  // namespace roadcov
