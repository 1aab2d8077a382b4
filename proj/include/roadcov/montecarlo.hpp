#pragma once

#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "roadcov/analytic.hpp"
#include "roadcov/association.hpp"
#include "roadcov/params.hpp"
#include "roadcov/snapshot.hpp"
#include "roadcov/stats.hpp"

namespace roadcov {

inline constexpr int kMaxResampleAttempts = 10;

struct TrialResult {
  /// SINR under the analytical interference model: an AP-served user does not
  /// see the non-serving APs of its own road.
  double sinr = 0.0;
  /// SINR with every non-serving node interfering.
  double sinr_all = 0.0;
  AssociationOutcome outcome;
  double desired = 0.0;
  double i1 = 0.0;   // UAV tier
  double i21 = 0.0;  // non-serving APs on the user's road
  double i22 = 0.0;  // APs on every other road
  int attempts = 1;
};

/// Realizes a snapshot for (seed, trial_index). Snapshots missing a UAV (unless
/// ap_only) or an AP layer on the user's road are redrawn on fresh substreams,
/// at most kMaxResampleAttempts times, then ResampleError is thrown.
NetworkSnapshot sample_snapshot(const SystemParams& params, SpectrumMode mode, std::uint64_t seed,
                                std::uint64_t trial_index, int* attempts = nullptr);

TrialResult evaluate_snapshot(const NetworkSnapshot& snapshot, const SystemParams& params,
                              SpectrumMode mode);

TrialResult run_trial(const SystemParams& params, SpectrumMode mode, std::uint64_t seed,
                      std::uint64_t trial_index);

/// Evaluates f(i) for i in [0, n) on `workers` threads. Results are stored by
/// index, so the output does not depend on the worker count.
template <class R, class F>
std::vector<R> map_trials(long n, int workers, F&& f) {
  std::vector<R> out(static_cast<std::size_t>(n));
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max(1L, n))));
  if (workers == 1) {
    for (long i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (long i = w; i < n; i += workers) out[i] = f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

struct CoveragePoint {
  double threshold = 0.0;  // linear
  double coverage = 0.0;
  Interval ci;
  double coverage_all = 0.0;  // own-road APs interfering with AP-served users
};

struct CoverageCurve {
  std::vector<CoveragePoint> points;
  long n_trials = 0;
  double uav_served_fraction = 0.0;
  double mean_attempts = 1.0;
};

CoverageCurve estimate_coverage(const SystemParams& params, SpectrumMode mode,
                                std::span<const double> thresholds, long n_trials,
                                std::uint64_t seed, int workers = 1);

struct LaplacePoint {
  double s = 0.0;
  MeanEstimate estimate;
};

struct LaplaceEstimate {
  std::vector<LaplacePoint> points;
  long n_trials = 0;
  long samples = 0;  // trials inside the conditioning bin
};

/// Relative half-width of the serving-distance bin for uav_served_i1_mhc.
inline constexpr double kConditioningBin = 0.02;

/// Empirical E[exp(-s I)] for the interference component selected by the scenario.
LaplaceEstimate estimate_laplace(const SystemParams& params, const LaplaceSpec& spec,
                                 std::span<const double> s_grid, long n_trials,
                                 std::uint64_t seed, int workers = 1);

struct AssociationStats {
  long n_trials = 0;
  double freq_uav_los = 0.0;  // realized association, by drawn link state
  double freq_uav_nlos = 0.0;
  double freq_ap = 0.0;
  double freq_nearest_los = 0.0;  // nearest UAV link in LoS, whatever the tier
  std::vector<double> nearest_uav;
  std::vector<double> nearest_ap;
  // Distances tagged by the conditioning events A_v^1 / A_v^2, i.e. whether a
  // UAV link with exponent alpha_v at the nearest-UAV distance beats the
  // strongest AP. Every trial lands in exactly one of A_v^1, A_v^2 for each v.
  std::vector<double> serving_uav_los;   // R1 | A_L^1
  std::vector<double> serving_uav_nlos;  // R1 | A_NL^1
  std::vector<double> serving_ap_los;    // R2 | A_L^2
  std::vector<double> serving_ap_nlos;   // R2 | A_NL^2
};

AssociationStats empirical_association_stats(const SystemParams& params, long n_trials,
                                             std::uint64_t seed, int workers = 1);

}  // namespace roadcov
