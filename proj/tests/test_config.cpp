#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "pvmpc/config.hpp"
#include "pvmpc/error.hpp"

using namespace pvmpc;

namespace {

std::string error_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("empty config yields the reference parameters") {
  for (const char* text : {"", "{}", "  \n"}) {
    const SystemConfig c = parse_config(text);
    CHECK(c.pv.p_rated_w == 285.0);
    CHECK(c.pv.gamma_pct_per_c == -0.39);
    CHECK(c.pv.n_panels == 3);
    CHECK(c.inverter_efficiency == 0.9);
    CHECK(c.battery.e_min_wh == 1080.0);
    CHECK(c.battery.e_max_wh == 5400.0);
    CHECK(c.battery.e_charge_max_wh == 810.0);
    CHECK(c.battery.e_discharge_max_wh == 844.5);
    CHECK(c.fridge.c_thermal_j_per_c == 8937.4);
    CHECK(c.fridge.r_thermal_c_per_w == 1.4749);
    CHECK(c.fridge.cop == 0.2324);
    CHECK(c.mpc.lambda4 == 10.0);
    CHECK(c.step_hours == doctest::Approx(1.0 / 6.0));
    CHECK(c.horizon_steps == 144);
    CHECK(c.initial_e_bat() == 5400.0);
    CHECK(c.initial_t_fridge_c == 2.0);
  }
}

TEST_CASE("invariant violations are explained") {
  CHECK(error_of(R"({"inverter_efficiency": 1.2})")
            .find("inverter efficiency must lie in (0,1]") != std::string::npos);
  CHECK(error_of(R"({"horizon_steps": 0})").find("horizon must be >= 1") !=
        std::string::npos);
  CHECK(error_of(R"({"battery": {"e_min_wh": 6000}})").find("battery") !=
        std::string::npos);
  CHECK(error_of(R"({"mpc": {"gamma_max": 3}})").find("gamma") != std::string::npos);
  CHECK(error_of(R"({"step_minutes": 7.5})").find("minute") != std::string::npos);
}

TEST_CASE("schema violations name the field path") {
  CHECK(error_of(R"({"pv": {"p_rated": 300}})").find("pv.p_rated") !=
        std::string::npos);
  CHECK(error_of(R"({"battery": {"e_max_wh": "big"}})").find("battery.e_max_wh") !=
        std::string::npos);
  CHECK(error_of(R"({"loads": {"fan_windows": ["21-9"]}})").find("loads.fan_windows") !=
        std::string::npos);
  CHECK(error_of("{not json").find("<config>") != std::string::npos);
}

TEST_CASE("config round-trips through serialize and parse") {
  SystemConfig c = parse_config(R"({
    "step_minutes": 15, "horizon_steps": 48,
    "pv": {"n_panels": 5, "faiman_literal": true},
    "battery": {"e_max_wh": 6000, "fast_multiplier": 1.5},
    "loads": {"light_windows": ["17:30-23:00"], "fan_windows": ["20:00-07:00", "12:00-14:00"], "n_fans": 2},
    "mpc": {"lambda1": 2.5, "eta_con": 0.95},
    "initial": {"e_bat_wh": 3000, "t_fridge_c": 3.5},
    "metrics": {"violation_tol_c": 0.1},
    "forecast": {"noise_std_wh": 5, "seed": 99}
  })");
  CHECK(c.step_hours == doctest::Approx(0.25));
  CHECK(c.loads.fan_windows.size() == 2);
  CHECK(c.initial_e_bat() == 3000.0);
  const SystemConfig back = parse_config(serialize_config(c));
  CHECK(back == c);
  CHECK(parse_config(serialize_config(SystemConfig{})) == SystemConfig{});
}

TEST_CASE("config files") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), DataError);
  const auto path = std::filesystem::temp_directory_path() / "pvmpc_cfg.json";
  {
    std::ofstream out(path);
    out << R"({"pv": {"n_panels": 4}})";
  }
  CHECK(load_config(path).pv.n_panels == 4);
  std::filesystem::remove(path);
}
