#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "roadcov/config.hpp"
#include "roadcov/errors.hpp"
#include "roadcov/experiment.hpp"
#include "roadcov/validation.hpp"

namespace {

using namespace roadcov;

enum Exit { kOk = 0, kCheckFailure = 1, kUsage = 2 };

struct Overrides {
  std::string config;
  std::optional<std::string> backend, spectrum, out;
  std::optional<long> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;

  void attach(CLI::App* app, bool with_config) {
    if (with_config) app->add_option("--config", config, "key = value configuration file");
    app->add_option("--backend", backend, "simulate, analyze or both");
    app->add_option("--trials", trials, "Monte Carlo trials per point");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--out", out, "output CSV path");
    app->add_option("--spectrum", spectrum, "comma list of ap_only, shared, orthogonal");
    app->add_option("--workers", workers, "worker threads");
  }

  // flags win over the file; they are applied before resolution so that the
  // sidecar records them like any other key
  void apply(ConfigTable& table) const {
    if (backend) table.set("backend", *backend);
    if (spectrum) table.set("spectrum_modes", *spectrum);
    if (out) table.set("output", *out);
    if (trials) table.set("trials", std::to_string(*trials));
    if (seed) table.set("seed", std::to_string(*seed));
    if (workers) table.set("workers", std::to_string(*workers));
  }
};

int run(const ExperimentConfig& config) {
  run_experiment(config, &std::cerr);
  return kOk;
}

int validate(const ExperimentConfig& config) {
  bool all = true;
  for (const auto& check : validate_config(config)) {
    std::cout << format_check(check) << '\n';
    all = all && check.pass;
  }
  std::cout << (all ? "all checks passed" : "some checks failed") << '\n';
  return all ? kOk : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage of cell-free road networks with UAV and roadside access points"};
  app.require_subcommand(1);

  Overrides run_opts, validate_opts, preset_opts;
  auto* run_cmd = app.add_subcommand("run", "evaluate a configuration and write CSV plus sidecar");
  run_opts.attach(run_cmd, true);
  auto* validate_cmd = app.add_subcommand("validate", "cross-check the simulator against the analytic model");
  validate_opts.attach(validate_cmd, true);

  auto* presets_cmd = app.add_subcommand("presets", "run a figure preset (fig2, fig3, fig4, fig5)");
  std::string preset_name;
  bool show = false;
  presets_cmd->add_option("name", preset_name, "preset name");
  presets_cmd->add_flag("--show", show, "print the preset configuration and exit");
  preset_opts.attach(presets_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*presets_cmd) {
      if (preset_name.empty()) {
        for (const auto& n : preset_names()) std::cout << n << '\n';
        return kOk;
      }
      ConfigTable table = parse_config_text(preset_text(preset_name), "preset " + preset_name);
      preset_opts.apply(table);
      const ExperimentConfig config = resolve_config(table);
      if (show) {
        std::cout << render_config(config);
        return kOk;
      }
      return run(config);
    }

    Overrides& o = *run_cmd ? run_opts : validate_opts;
    ConfigTable table = o.config.empty() ? ConfigTable{} : load_config_file(o.config);
    o.apply(table);
    const ExperimentConfig config = resolve_config(table);
    return *run_cmd ? run(config) : validate(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kCheckFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailure;
  }
}
