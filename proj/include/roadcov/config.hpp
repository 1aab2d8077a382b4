#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "roadcov/params.hpp"

namespace roadcov {

inline constexpr std::string_view kCodeVersion = "0.1.0";

/// Raised for malformed or inconsistent configuration; messages carry
/// "source:line:" prefixes when a line is known.
struct ConfigError : ParameterError {
  using ParameterError::ParameterError;
};

enum class Backend { simulate, analyze, both };

std::string_view to_string(Backend backend);

/// Raw key/value pairs as written by the user, with their line numbers.
struct ConfigTable {
  std::string source = "<config>";
  std::map<std::string, std::string> values;
  std::map<std::string, int> lines;

  void set(const std::string& key, const std::string& value, int line = 0);
};

ConfigTable parse_config_text(std::string_view text, const std::string& source = "<config>");
ConfigTable load_config_file(const std::string& path);

/// Fully resolved experiment: every schema key has a textual value (defaults
/// filled in), and the typed fields are derived from that text exactly once.
struct ExperimentConfig {
  std::map<std::string, std::string> entries;

  SystemParams params;
  std::string name;
  Backend backend = Backend::both;
  std::vector<SpectrumMode> spectrum_modes;
  std::string sweep_variable;
  std::vector<double> sweep_values;
  std::vector<double> thresholds_db;
  std::string series_variable;  // empty when there is a single series
  std::vector<double> series_values;
  long trials = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string output;
};

/// Schema defaults overlaid with the user table, then validated.
ExperimentConfig resolve_config(const ConfigTable& user = {});

/// Copy with one key replaced by a number (used for sweeps and series).
ExperimentConfig with_value(const ExperimentConfig& config, const std::string& key, double value);
ExperimentConfig with_text(const ExperimentConfig& config, const std::string& key,
                           const std::string& value);

/// Keys that name a numeric model parameter and may be swept.
bool is_sweepable(std::string_view key);
std::vector<std::string> schema_keys();

/// Every key in schema order, re-ingestible by parse_config_text.
std::string render_config(const ExperimentConfig& config);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace roadcov
