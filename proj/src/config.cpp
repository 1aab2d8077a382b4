#include "roadcov/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace roadcov {

namespace {

enum class Kind { text, number, integer, number_list, choice, mode_list };

struct Field {
  const char* key;
  const char* fallback;
  Kind kind;
  bool sweepable;
  const char* comment;
};

// Order here is the order of rendered configs.
const std::vector<Field>& schema() {
  static const std::vector<Field> fields = {
      {"name", "custom", Kind::text, false, "experiment label"},
      {"backend", "both", Kind::choice, false, "simulate | analyze | both"},
      {"spectrum_modes", "shared", Kind::mode_list, false, "shared, orthogonal, ap_only"},
      {"sweep_variable", "threshold_db", Kind::text, false, "threshold_db or a numeric key"},
      {"sweep_values", "-10,-5,0,5,10,15,20", Kind::number_list, false, "sorted grid"},
      {"thresholds_db", "0", Kind::number_list, false, "used when sweeping another key"},
      {"series_variable", "none", Kind::text, false, "one CSV per value; none for a single curve"},
      {"series_values", "", Kind::number_list, false, "sorted grid"},
      {"trials", "10000", Kind::integer, false, "Monte Carlo snapshots per point"},
      {"seed", "1", Kind::integer, false, "master seed"},
      {"workers", "1", Kind::integer, false, "threads"},
      {"output", "coverage.csv", Kind::text, false, "CSV path; sidecar gets .meta appended"},
      {"lambda_u_per_km2", "10", Kind::number, true, "retained UAV density"},
      {"lambda_p_per_km2", "auto", Kind::number, true, "parent density for the sampler; auto = implied by lambda_u"},
      {"safety_distance_m", "100", Kind::number, true, "UAV hard-core distance"},
      {"altitude_m", "100", Kind::number, true, "UAV altitude"},
      {"mu_l_per_km", "10", Kind::number, true, "road length per unit area"},
      {"lambda_a_per_km", "2,2,2", Kind::number_list, true, "AP density per layer; one entry per layer"},
      {"p_u_dbm", "30", Kind::number, true, ""},
      {"p_a_dbm", "23", Kind::number, true, ""},
      {"noise_dbm", "-94", Kind::number, true, "not stated by the model; keeps baseline interference-limited"},
      {"power_control_c", "1e-7", Kind::number, true, "W m^-alpha_ap"},
      {"alpha_los", "2", Kind::number, true, ""},
      {"alpha_nlos", "3", Kind::number, true, ""},
      {"alpha_ap", "3", Kind::number, true, ""},
      {"los_a", "12.08", Kind::number, true, ""},
      {"los_b", "0.11", Kind::number, true, ""},
      {"m_los", "3", Kind::integer, true, ""},
      {"m_nlos", "3", Kind::integer, true, ""},
      {"m_21", "3", Kind::integer, true, "user's road"},
      {"m_22", "3", Kind::integer, true, "other roads"},
      {"gain_uav_main", "1", Kind::number, true, "linear"},
      {"gain_uav_interferer", "1", Kind::number, true, "linear"},
      {"gain_ap_main", "1", Kind::number, true, "linear"},
      {"gain_ap_interferer", "1", Kind::number, true, "linear"},
      {"bias_uav_db", "0", Kind::number, true, ""},
      {"bias_ap_db", "0", Kind::number, true, ""},
      {"window_radius_m", "2000", Kind::number, true, "shared truncation radius of both backends"},
      {"association_contender", "all_layers", Kind::choice, false, "all_layers | first_layer"},
      {"uav_exclusion", "altitude", Kind::choice, false, "altitude | association"},
      {"interferer_order", "per_state", Kind::choice, false, "per_state | los_order"},
      {"uav_field", "matern", Kind::choice, false, "matern | poisson"},
      {"los_weighting", "marginal", Kind::choice, false, "marginal | distance"},
  };
  return fields;
}

const Field* find_field(std::string_view key) {
  for (const auto& f : schema())
    if (key == f.key) return &f;
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

// Resolves values while remembering where each one came from.
class Reader {
 public:
  Reader(const ExperimentConfig& cfg, const ConfigTable* user) : cfg_(cfg), user_(user) {}

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    std::string where = "default";
    if (user_) {
      auto it = user_->lines.find(key);
      if (it != user_->lines.end())
        where = user_->source + ":" + std::to_string(it->second);
      else if (user_->values.count(key))
        where = user_->source;
    }
    throw ConfigError(where + ": " + key + ": " + message);
  }

  const std::string& text(const std::string& key) const { return cfg_.entries.at(key); }

  double number(const std::string& key) const { return parse_number(key, text(key)); }

  double parse_number(const std::string& key, const std::string& s) const {
    double value = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value))
      fail(key, "expected a number, got '" + s + "'");
    return value;
  }

  long integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) fail(key, "expected an integer, got '" + text(key) + "'");
    return static_cast<long>(v);
  }

  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(text(key))) out.push_back(parse_number(key, item));
    return out;
  }

  std::vector<double> sorted_grid(const std::string& key) const {
    auto grid = list(key);
    if (grid.empty()) fail(key, "grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (!(grid[i] > grid[i - 1])) fail(key, "grid must be strictly increasing");
    return grid;
  }

  std::string choice(const std::string& key, std::initializer_list<const char*> allowed) const {
    const std::string& v = text(key);
    for (const char* a : allowed)
      if (v == a) return v;
    std::string msg = "unknown value '" + v + "'; expected one of";
    for (const char* a : allowed) msg += std::string(" ") + a;
    fail(key, msg);
  }

 private:
  const ExperimentConfig& cfg_;
  const ConfigTable* user_;
};

void derive(ExperimentConfig& cfg, const ConfigTable* user) {
  const Reader in(cfg, user);
  SystemParams& p = cfg.params;
  p = SystemParams{};

  cfg.name = in.text("name");
  const std::string backend = in.choice("backend", {"simulate", "analyze", "both"});
  cfg.backend = backend == "simulate" ? Backend::simulate
                : backend == "analyze" ? Backend::analyze
                                       : Backend::both;
  cfg.spectrum_modes.clear();
  for (const auto& m : split_list(in.text("spectrum_modes"))) {
    try {
      cfg.spectrum_modes.push_back(spectrum_mode_from_string(m));
    } catch (const ParameterError& e) {
      in.fail("spectrum_modes", e.what());
    }
  }
  if (cfg.spectrum_modes.empty()) in.fail("spectrum_modes", "at least one mode is required");

  cfg.sweep_variable = in.text("sweep_variable");
  if (cfg.sweep_variable != "threshold_db" && !is_sweepable(cfg.sweep_variable))
    in.fail("sweep_variable", "'" + cfg.sweep_variable + "' is not a numeric parameter");
  cfg.sweep_values = in.sorted_grid("sweep_values");
  cfg.thresholds_db = cfg.sweep_variable == "threshold_db" ? cfg.sweep_values
                                                           : in.sorted_grid("thresholds_db");
  cfg.series_variable = in.text("series_variable");
  if (cfg.series_variable == "none") {
    cfg.series_variable.clear();
    cfg.series_values.clear();
  } else {
    if (!is_sweepable(cfg.series_variable))
      in.fail("series_variable", "'" + cfg.series_variable + "' is not a numeric parameter");
    if (cfg.series_variable == cfg.sweep_variable)
      in.fail("series_variable", "must differ from sweep_variable");
    cfg.series_values = in.sorted_grid("series_values");
  }
  cfg.trials = in.integer("trials");
  if (cfg.trials < 100) in.fail("trials", "need at least 100 trials");
  const long seed = in.integer("seed");
  if (seed < 0) in.fail("seed", "must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.workers = static_cast<int>(in.integer("workers"));
  if (cfg.workers < 1 || cfg.workers > 1024) in.fail("workers", "must be in [1, 1024]");
  cfg.output = in.text("output");
  if (cfg.output.empty()) in.fail("output", "path is empty");

  // config units -> SI, once
  p.mhc.lambda_u = in.number("lambda_u_per_km2") * 1e-6;
  if (in.text("lambda_p_per_km2") != "auto")
    p.mhc.lambda_p_override = in.number("lambda_p_per_km2") * 1e-6;
  p.mhc.d = in.number("safety_distance_m");
  p.channel.H_U = in.number("altitude_m");
  p.lambda_l = in.number("mu_l_per_km") * 1e-3 / std::numbers::pi;
  p.lambda_a = in.list("lambda_a_per_km");
  if (p.lambda_a.empty()) in.fail("lambda_a_per_km", "at least one layer is required");
  for (double& l : p.lambda_a) l *= 1e-3;
  p.power.P_U = dbm_to_watts(in.number("p_u_dbm"));
  p.power.P_a = dbm_to_watts(in.number("p_a_dbm"));
  p.power.sigma2 = dbm_to_watts(in.number("noise_dbm"));
  p.power.C = in.number("power_control_c");
  p.channel.alpha_L = in.number("alpha_los");
  p.channel.alpha_NL = in.number("alpha_nlos");
  p.channel.alpha_a = in.number("alpha_ap");
  p.channel.a = in.number("los_a");
  p.channel.b = in.number("los_b");
  p.channel.m_L = static_cast<int>(in.integer("m_los"));
  p.channel.m_NL = static_cast<int>(in.integer("m_nlos"));
  p.channel.m_21 = static_cast<int>(in.integer("m_21"));
  p.channel.m_22 = static_cast<int>(in.integer("m_22"));
  p.channel.G_U = in.number("gain_uav_main");
  p.channel.g_U = in.number("gain_uav_interferer");
  p.channel.G_a = in.number("gain_ap_main");
  p.channel.g_a = in.number("gain_ap_interferer");
  p.power.B_U = db_to_linear(in.number("bias_uav_db"));
  p.power.B_a = db_to_linear(in.number("bias_ap_db"));
  p.window_radius = in.number("window_radius_m");

  auto& o = p.options;
  o.contender = in.choice("association_contender", {"all_layers", "first_layer"}) == "all_layers"
                    ? AssociationContender::all_layers
                    : AssociationContender::first_layer;
  o.uav_exclusion = in.choice("uav_exclusion", {"altitude", "association"}) == "altitude"
                        ? UavExclusion::altitude
                        : UavExclusion::association;
  o.interferer_order = in.choice("interferer_order", {"per_state", "los_order"}) == "per_state"
                           ? InterfererOrder::per_state
                           : InterfererOrder::los_order;
  o.uav_field = in.choice("uav_field", {"matern", "poisson"}) == "matern" ? UavField::matern
                                                                          : UavField::poisson;
  o.los_weighting = in.choice("los_weighting", {"marginal", "distance"}) == "marginal"
                        ? LosWeighting::marginal
                        : LosWeighting::distance;

  if (!p.mhc.lambda_p_override && p.mhc.d > 0.0 &&
      p.mhc.lambda_u * std::numbers::pi * p.mhc.d * p.mhc.d >= 1.0) {
    const bool user_set_d = user && user->values.count("safety_distance_m") &&
                            !user->values.count("lambda_u_per_km2");
    in.fail(user_set_d ? "safety_distance_m" : "lambda_u_per_km2",
            "lambda_u_per_km2 = " + in.text("lambda_u_per_km2") +
                " is not below the hard-core saturation 1/(pi d^2) = " +
                format_number(1e6 / (std::numbers::pi * p.mhc.d * p.mhc.d)) +
                " per km^2 at safety_distance_m = " + in.text("safety_distance_m"));
  }

  try {
    p.validate();
  } catch (const ParameterError& e) {
    throw ConfigError((user ? user->source : std::string("<config>")) + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::simulate: return "simulate";
    case Backend::analyze: return "analyze";
    case Backend::both: return "both";
  }
  return "?";
}

void ConfigTable::set(const std::string& key, const std::string& value, int line) {
  values[key] = value;
  if (line > 0) lines[key] = line;
}

ConfigTable parse_config_text(std::string_view text, const std::string& source) {
  ConfigTable table;
  table.source = source;
  std::stringstream ss{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (!find_field(key)) throw ConfigError(where + "unknown key '" + key + "'");
    if (table.values.count(key))
      throw ConfigError(where + "duplicate key '" + key + "' (first on line " +
                        std::to_string(table.lines[key]) + ")");
    table.set(key, value, line_no);
  }
  return table;
}

ConfigTable load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

ExperimentConfig resolve_config(const ConfigTable& user) {
  ExperimentConfig cfg;
  for (const auto& f : schema()) cfg.entries[f.key] = f.fallback;
  for (const auto& [key, value] : user.values) {
    if (!find_field(key)) throw ConfigError(user.source + ": unknown key '" + key + "'");
    cfg.entries[key] = value;
  }
  derive(cfg, &user);
  return cfg;
}

ExperimentConfig with_text(const ExperimentConfig& config, const std::string& key,
                           const std::string& value) {
  if (!find_field(key)) throw ConfigError("unknown key '" + key + "'");
  ConfigTable table;
  table.source = "<override " + key + ">";
  for (const auto& [k, v] : config.entries) table.values[k] = v;
  table.values[key] = value;
  table.lines[key] = 0;
  return resolve_config(table);
}

ExperimentConfig with_value(const ExperimentConfig& config, const std::string& key, double value) {
  if (!is_sweepable(key)) throw ConfigError("'" + key + "' is not a numeric parameter");
  const Field* f = find_field(key);
  std::string text = format_number(value);
  if (f->kind == Kind::number_list) {
    // a scalar sweep of a per-layer list keeps the layer count
    const std::size_t layers = std::max<std::size_t>(1, split_list(config.entries.at(key)).size());
    std::string joined;
    for (std::size_t i = 0; i < layers; ++i) joined += (i ? "," : "") + text;
    text = joined;
  }
  return with_text(config, key, text);
}

bool is_sweepable(std::string_view key) {
  const Field* f = find_field(key);
  return f && f->sweepable;
}

std::vector<std::string> schema_keys() {
  std::vector<std::string> keys;
  for (const auto& f : schema()) keys.emplace_back(f.key);
  return keys;
}

std::string render_config(const ExperimentConfig& config) {
  std::ostringstream out;
  for (const auto& f : schema()) {
    out << f.key << " = " << config.entries.at(f.key);
    if (*f.comment) out << "  # " << f.comment;
    out << '\n';
  }
  return out.str();
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw ConfigError("cannot format number");
  return std::string(buf, ptr);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace roadcov
