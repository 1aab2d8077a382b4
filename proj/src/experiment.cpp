#include "roadcov/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "roadcov/analytic.hpp"
#include "roadcov/montecarlo.hpp"

namespace roadcov {

namespace {

std::string series_path(const std::string& output, const std::string& key, double value) {
  const std::filesystem::path p(output);
  std::string stem = p.stem().string() + "_" + key + "_" + format_number(value);
  return (p.parent_path() / (stem + p.extension().string())).string();
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << content;
  if (!out) throw std::runtime_error(path + ": write failed");
}

const char* const kFig2 = R"(name = fig2
backend = both
spectrum_modes = ap_only, shared, orthogonal
sweep_variable = threshold_db
sweep_values = -10,-7.5,-5,-2.5,0,2.5,5,7.5,10,12.5,15,17.5,20
trials = 20000
output = fig2.csv
)";

const char* const kFig3 = R"(name = fig3
backend = both
spectrum_modes = shared
sweep_variable = lambda_u_per_km2
sweep_values = 1,2,3,4,5,6,7,8,9,10
thresholds_db = 0
series_variable = altitude_m
series_values = 50,100,200
trials = 20000
output = fig3.csv
)";

// lambda_u is held fixed across d, so it must stay below the hard-core
// saturation 1/(pi d^2) = 3.54 per km^2 at d = 300 m
const char* const kFig4 = R"(name = fig4
backend = both
spectrum_modes = shared
lambda_u_per_km2 = 3
sweep_variable = safety_distance_m
sweep_values = 50,100,150,200,250,300
thresholds_db = 0
series_variable = bias_uav_db
series_values = 0,5,10
trials = 20000
output = fig4.csv
)";

const char* const kFig5 = R"(name = fig5
backend = both
spectrum_modes = shared
sweep_variable = alpha_nlos
sweep_values = 3,3.5,4,4.5,5
thresholds_db = 0
series_variable = alpha_los
series_values = 2,2.5,3
trials = 20000
output = fig5.csv
)";

}  // namespace

std::vector<CoverageRow> compute_rows(const ExperimentConfig& config, std::ostream* log) {
  if (!config.series_variable.empty())
    throw ConfigError("compute_rows: expand the series first");
  const bool threshold_sweep = config.sweep_variable == "threshold_db";
  const std::vector<double> thresholds =
      threshold_sweep ? config.sweep_values : config.thresholds_db;
  std::vector<double> linear;
  for (double db : thresholds) linear.push_back(db_to_linear(db));

  std::vector<ExperimentConfig> points;
  if (threshold_sweep)
    points.push_back(config);
  else
    for (double v : config.sweep_values) points.push_back(with_value(config, config.sweep_variable, v));

  const bool analyze = config.backend != Backend::simulate;
  const bool simulate = config.backend != Backend::analyze;
  const std::size_t n_modes = config.spectrum_modes.size();
  const std::size_t n_thr = thresholds.size();

  // analytic grid, evaluated in parallel and stored by index
  std::vector<double> analytic;
  if (analyze) {
    const long tasks = static_cast<long>(points.size() * n_modes * n_thr);
    analytic = map_trials<double>(tasks, config.workers, [&](long t) {
      const std::size_t j = t % n_thr;
      const std::size_t m = (t / n_thr) % n_modes;
      const std::size_t i = t / (n_thr * n_modes);
      try {
        return coverage_probability(linear[j], points[i].params, config.spectrum_modes[m]);
      } catch (const std::exception& e) {
        std::ostringstream what;
        what << "analyze (" << config.sweep_variable << " = "
             << format_number(threshold_sweep ? thresholds[j] : config.sweep_values[i])
             << ", threshold_db = " << format_number(thresholds[j])
             << ", spectrum_mode = " << to_string(config.spectrum_modes[m]) << "): " << e.what();
        throw NumericError(what.str());
      }
    });
  }

  std::vector<CoverageRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t m = 0; m < n_modes; ++m) {
      const SpectrumMode mode = config.spectrum_modes[m];
      if (analyze) {
        for (std::size_t j = 0; j < n_thr; ++j) {
          const double sweep = threshold_sweep ? thresholds[j] : config.sweep_values[i];
          rows.push_back({sweep, thresholds[j], analytic[(i * n_modes + m) * n_thr + j],
                          std::nullopt, Backend::analyze, mode});
        }
      }
      if (simulate) {
        if (log)
          *log << config.name << ": simulate " << to_string(mode) << " point " << i + 1 << "/"
               << points.size() << " (" << config.trials << " trials)\n";
        const CoverageCurve curve = estimate_coverage(points[i].params, mode, linear, config.trials,
                                                      config.seed, config.workers);
        for (std::size_t j = 0; j < n_thr; ++j) {
          const double sweep = threshold_sweep ? thresholds[j] : config.sweep_values[i];
          rows.push_back({sweep, thresholds[j], curve.points[j].coverage, curve.points[j].ci,
                          Backend::simulate, mode});
        }
      }
    }
  }
  return rows;
}

std::string format_csv(const std::vector<CoverageRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.sweep_value) << ',' << format_number(r.threshold_db) << ','
        << format_number(r.coverage) << ',';
    if (r.ci) out << format_number(r.ci->low) << ',' << format_number(r.ci->high);
    else out << ',';
    out << ',' << to_string(r.backend) << ',' << to_string(r.mode) << '\n';
  }
  return out.str();
}

std::string format_sidecar(const ExperimentConfig& config) {
  const SystemParams& p = config.params;
  std::ostringstream out;
  out << "# resolved configuration; re-ingest with --config\n"
      << "# code_version: " << kCodeVersion << '\n'
      << "# si: sigma2_w = " << format_number(p.power.sigma2)
      << ", p_u_w = " << format_number(p.power.P_U) << ", p_a_w = " << format_number(p.power.P_a)
      << '\n'
      << "# si: lambda_u_per_m2 = " << format_number(p.mhc.lambda_u)
      << ", lambda_p_per_m2 = " << format_number(p.mhc.lambda_p())
      << ", lambda_l = " << format_number(p.lambda_l)
      << ", lambda_a_total_per_m = " << format_number(p.lambda_a_total()) << '\n'
      << render_config(config);
  return out.str();
}

std::vector<ExperimentConfig> expand_series(const ExperimentConfig& config) {
  if (config.series_variable.empty()) return {config};
  std::vector<ExperimentConfig> out;
  for (double v : config.series_values) {
    ExperimentConfig c = with_value(config, config.series_variable, v);
    c = with_text(c, "output", series_path(config.output, config.series_variable, v));
    c = with_text(c, "series_variable", "none");
    c = with_text(c, "series_values", "");
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::string> run_experiment(const ExperimentConfig& config, std::ostream* log) {
  std::vector<std::string> written;
  for (const auto& c : expand_series(config)) {
    const std::string csv = format_csv(compute_rows(c, log));
    write_file(c.output, csv);
    write_file(c.output + ".meta", format_sidecar(c));
    written.push_back(c.output);
    if (log) *log << "wrote " << c.output << '\n';
  }
  return written;
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4", "fig5"}; }

std::string preset_text(std::string_view name) {
  if (name == "fig2") return kFig2;
  if (name == "fig3") return kFig3;
  if (name == "fig4") return kFig4;
  if (name == "fig5") return kFig5;
  throw ConfigError("unknown preset '" + std::string(name) + "' (fig2, fig3, fig4, fig5)");
}

ExperimentConfig preset(std::string_view name) {
  return resolve_config(parse_config_text(preset_text(name), "preset " + std::string(name)));
}

}  // namespace roadcov
