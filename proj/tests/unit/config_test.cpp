#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include "roadcov/config.hpp"
#include "roadcov/experiment.hpp"

using namespace roadcov;

namespace {

std::string error_of(const std::string& text) {
  try {
    resolve_config(parse_config_text(text, "t.cfg"));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults resolve to the baseline in SI units") {
  const auto c = resolve_config();
  const SystemParams& p = c.params;
  CHECK(p.mhc.lambda_u == doctest::Approx(1e-5));
  CHECK(p.mhc.d == 100.0);
  CHECK(p.channel.H_U == 100.0);
  CHECK(p.lambda_l == doctest::Approx(0.01 / M_PI));
  CHECK(p.lambda_a.size() == 3);
  CHECK(p.lambda_a[0] == doctest::Approx(0.002));
  CHECK(p.power.P_U == doctest::Approx(1.0));
  CHECK(p.power.P_a == doctest::Approx(0.19952623149688797));
  CHECK(p.power.sigma2 == doctest::Approx(3.981071705534972e-13));
  CHECK(p.power.C == 1e-7);
  CHECK(c.sweep_variable == "threshold_db");
  CHECK(c.entries.at("noise_dbm") == "-94");
}

TEST_CASE("unit conversions round trip") {
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
  CHECK(watts_to_dbm(dbm_to_watts(-94.0)) == doctest::Approx(-94.0).epsilon(1e-14));
  CHECK(linear_to_db(db_to_linear(7.5)) == doctest::Approx(7.5).epsilon(1e-14));
  for (double x : {0.1, 1.0 / 3, 2e-7, 12.08, -94.0, 1e300}) CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
  CHECK(format_number(10.0) == "10");
}

TEST_CASE("schema errors carry the offending line") {
  CHECK(error_of("trials = 500\n\nbogus = 1\n").find("t.cfg:3") != std::string::npos);
  CHECK(error_of("sweep_values =\n").find("t.cfg:1") != std::string::npos);
  CHECK(error_of("sweep_values = 3, 1, 2\n").find("t.cfg:1") != std::string::npos);
  CHECK(error_of("sweep_variable = not_a_key\n").find("t.cfg:1") != std::string::npos);
  CHECK(error_of("trials = 10\n").find("t.cfg:1") != std::string::npos);
  CHECK(error_of("seed = 1\nseed = 2\n").find("t.cfg:2") != std::string::npos);
  CHECK(error_of("just words\n").find("t.cfg:1") != std::string::npos);
  CHECK(error_of("lambda_u_per_km2 = 40\n").find("t.cfg:1") != std::string::npos);
  CHECK(error_of("# comment only\nseed = 4  # trailing\n").empty());
}

TEST_CASE("sweep values rewrite one key") {
  const auto c = resolve_config();
  const auto d = with_value(c, "safety_distance_m", 150.0);
  CHECK(d.params.mhc.d == 150.0);
  CHECK_THROWS_AS(with_value(c, "safety_distance_m", 250.0), ConfigError);
  const auto a = with_value(c, "lambda_a_per_km", 4.0);
  CHECK(a.params.lambda_a == std::vector<double>{0.004, 0.004, 0.004});
  const auto b = with_value(c, "bias_uav_db", 10.0);
  CHECK(b.params.power.B_U == doctest::Approx(10.0));
  CHECK(is_sweepable("alpha_nlos"));
  CHECK_FALSE(is_sweepable("output"));
}

TEST_CASE("the sidecar re-ingests to the same configuration") {
  auto c = preset("fig4");
  c = expand_series(c).front();
  const auto text = format_sidecar(c);
  const auto back = resolve_config(parse_config_text(text, "sidecar"));
  CHECK(back.entries == c.entries);
  CHECK(render_config(back) == render_config(c));
  CHECK(back.params.mhc.lambda_u == c.params.mhc.lambda_u);
  CHECK(back.params.power.sigma2 == c.params.power.sigma2);
}

TEST_CASE("presets resolve") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto c = preset(name);
    CHECK(c.name == name);
  }
  CHECK(preset("fig2").spectrum_modes.size() == 3);
  CHECK(expand_series(preset("fig3")).size() == 3);
  CHECK(expand_series(preset("fig3"))[1].output == "fig3_altitude_m_100.csv");
  CHECK_THROWS_AS(preset("fig9"), ConfigError);
}

TEST_CASE("CSV rows are ordered and formatted") {
  auto c = resolve_config(parse_config_text(
      "backend = analyze\nspectrum_modes = shared, ap_only\nsweep_variable = altitude_m\n"
      "sweep_values = 100, 200\nthresholds_db = 0, 10\n",
      "t"));
  const auto rows = compute_rows(c);
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].sweep_value == 100.0);
  CHECK(rows[0].mode == SpectrumMode::shared);
  CHECK(rows[1].threshold_db == 10.0);
  CHECK(rows[2].mode == SpectrumMode::ap_only);
  CHECK(rows[4].sweep_value == 200.0);
  const auto csv = format_csv(rows);
  CHECK(csv.rfind(std::string(kCsvHeader) + "\n100,0,", 0) == 0);
  CHECK(csv.find(",,,analyze,shared\n") != std::string::npos);
  CHECK(csv.find('\r') == std::string::npos);
}
