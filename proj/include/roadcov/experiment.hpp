#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roadcov/config.hpp"
#include "roadcov/stats.hpp"

namespace roadcov {

struct CoverageRow {
  double sweep_value = 0.0;
  double threshold_db = 0.0;
  double coverage = 0.0;
  std::optional<Interval> ci;  // Monte Carlo rows only
  Backend backend = Backend::analyze;
  SpectrumMode mode = SpectrumMode::shared;
};

inline constexpr std::string_view kCsvHeader =
    "sweep_value,threshold_db,coverage,ci_low,ci_high,backend,spectrum_mode";

/// Coverage rows for a single series, ordered by sweep index, then spectrum
/// mode, backend (analyze before simulate) and threshold.
std::vector<CoverageRow> compute_rows(const ExperimentConfig& config, std::ostream* log = nullptr);

std::string format_csv(const std::vector<CoverageRow>& rows);

/// Resolved config plus code version and derived SI values, as re-ingestible text.
std::string format_sidecar(const ExperimentConfig& config);

/// One config per output file: the config itself, or one per series value
/// with the series key fixed and the output path suffixed.
std::vector<ExperimentConfig> expand_series(const ExperimentConfig& config);

/// Runs every series and writes <output> and <output>.meta for each.
/// Returns the CSV paths written.
std::vector<std::string> run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

std::vector<std::string> preset_names();
std::string preset_text(std::string_view name);
ExperimentConfig preset(std::string_view name);

}  // namespace roadcov
