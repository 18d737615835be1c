#include "pvmpc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pvmpc/error.hpp"

namespace pvmpc {

using nlohmann::json;

void MpcParams::validate() const {
  for (double w : {lambda1, lambda2, lambda3, lambda4}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DataError("mpc weights must be finite and >= 0");
    }
  }
  if (!(eta_con > 0.0 && eta_con <= 1.0)) {
    throw DataError("mpc.eta_con must lie in (0,1]");
  }
  if (!(gamma_min < 0.0 && gamma_max > 0.0)) {
    throw DataError("mpc gamma bounds must satisfy gamma_min < 0 < gamma_max");
  }
  // The charge controller only knows discharge, normal and fast modes.
  if (gamma_min < -1.0 || gamma_max > 2.0) {
    throw DataError("mpc gamma bounds must lie within [-1, 2]");
  }
}

void SystemConfig::validate() const {
  pv.validate();
  battery.validate();
  fridge.validate();
  loads.validate();
  mpc.validate();
  if (!(inverter_efficiency > 0.0 && inverter_efficiency <= 1.0)) {
    throw DataError("inverter efficiency must lie in (0,1]");
  }
  if (!(step_hours > 0.0)) throw DataError("step must be positive");
  step_minutes(step_hours);
  if (horizon_steps < 1) throw DataError("horizon must be >= 1");
  if (initial_e_bat_wh && (*initial_e_bat_wh < battery.e_min_wh ||
                           *initial_e_bat_wh > battery.e_max_wh)) {
    throw DataError("initial.e_bat_wh must lie within the battery bounds");
  }
  if (!(violation_tol_c >= 0.0)) {
    throw DataError("metrics.violation_tol_c must be >= 0");
  }
  if (!(forecast_noise_std_wh >= 0.0)) {
    throw DataError("forecast.noise_std_wh must be >= 0");
  }
}

namespace {

// Walks one JSON object, remembering which keys were read so leftovers can be
// reported as unknown fields.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) {
      throw DataError("schema violation at '" + display() +
                      "': expected an object");
    }
  }

  ~ObjectReader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.count(key)) {
        throw DataError("schema violation: unknown field '" + child(key) + "'");
      }
    }
  }

  void number(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(key, "expected a number");
      out = v->get<double>();
    }
  }

  void integer(const char* key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(key, "expected an integer");
      out = v->get<int>();
    }
  }

  void unsigned64(const char* key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(key, "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void boolean(const char* key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(key, "expected true or false");
      out = v->get<bool>();
    }
  }

  void optional_number(const char* key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
        return;
      }
      if (!v->is_number()) fail(key, "expected a number or null");
      out = v->get<double>();
    }
  }

  void windows(const char* key, std::vector<DailyWindow>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(key, "expected a list of \"HH:MM-HH:MM\"");
      out.clear();
      for (const auto& item : *v) {
        if (!item.is_string()) fail(key, "expected a list of \"HH:MM-HH:MM\"");
        try {
          out.push_back(DailyWindow::parse(item.get<std::string>()));
        } catch (const DataError& e) {
          fail(key, e.what());
        }
      }
    }
  }

  const json* object(const char* key) { return find(key); }
  std::string child(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

 private:
  const json* find(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  [[noreturn]] void fail(const char* key, const std::string& what) const {
    throw DataError("schema violation at '" + child(key) + "': " + what);
  }

  std::string display() const { return path_.empty() ? "<root>" : path_; }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
void section(ObjectReader& parent, const char* key, Fn&& fn) {
  if (const json* v = parent.object(key)) {
    ObjectReader r(*v, parent.child(key));
    fn(r);
  }
}

json windows_json(const std::vector<DailyWindow>& ws) {
  json arr = json::array();
  for (const auto& w : ws) arr.push_back(w.to_string());
  return arr;
}

}  // namespace

SystemConfig parse_config(std::string_view text, std::string_view origin) {
  json root = json::object();
  const bool blank = text.find_first_not_of(" \t\r\n") == std::string_view::npos;
  try {
    if (!blank) root = json::parse(text.begin(), text.end(), nullptr, true,
                       /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw DataError(std::string(origin) + ": " + e.what());
  }
  if (root.is_null()) root = json::object();

  SystemConfig c;
  double step_minutes_value = c.step_hours * 60.0;
  {
    ObjectReader r(root, "");
    r.number("step_minutes", step_minutes_value);
    r.integer("horizon_steps", c.horizon_steps);
    r.number("inverter_efficiency", c.inverter_efficiency);
    section(r, "pv", [&](ObjectReader& s) {
      s.integer("n_panels", c.pv.n_panels);
      s.number("p_rated_w", c.pv.p_rated_w);
      s.number("gamma_pct_per_c", c.pv.gamma_pct_per_c);
      s.number("g_std_w_m2", c.pv.g_std_w_m2);
      s.number("t_std_c", c.pv.t_std_c);
      s.number("u0_w_m2k", c.pv.u0_w_m2k);
      s.number("u1_w_m2k_per_ms", c.pv.u1_w_m2k_per_ms);
      s.boolean("faiman_literal", c.pv.faiman_literal);
    });
    section(r, "battery", [&](ObjectReader& s) {
      s.number("e_min_wh", c.battery.e_min_wh);
      s.number("e_max_wh", c.battery.e_max_wh);
      s.number("e_charge_max_wh", c.battery.e_charge_max_wh);
      s.number("e_discharge_max_wh", c.battery.e_discharge_max_wh);
      s.number("eta_charge", c.battery.eta_charge);
      s.number("eta_discharge", c.battery.eta_discharge);
      s.number("fast_multiplier", c.battery.fast_multiplier);
    });
    section(r, "fridge", [&](ObjectReader& s) {
      s.number("c_thermal_j_per_c", c.fridge.c_thermal_j_per_c);
      s.number("r_thermal_c_per_w", c.fridge.r_thermal_c_per_w);
      s.number("cop", c.fridge.cop);
      s.number("p_rated_w", c.fridge.p_rated_w);
      s.number("t_min_c", c.fridge.t_min_c);
      s.number("t_max_c", c.fridge.t_max_c);
    });
    section(r, "loads", [&](ObjectReader& s) {
      s.windows("light_windows", c.loads.light_windows);
      s.windows("fan_windows", c.loads.fan_windows);
      s.integer("n_lights", c.loads.n_lights);
      s.number("p_light_w", c.loads.p_light_w);
      s.integer("n_fans", c.loads.n_fans);
      s.number("p_fan_w", c.loads.p_fan_w);
    });
    section(r, "mpc", [&](ObjectReader& s) {
      s.number("lambda1", c.mpc.lambda1);
      s.number("lambda2", c.mpc.lambda2);
      s.number("lambda3", c.mpc.lambda3);
      s.number("lambda4", c.mpc.lambda4);
      s.number("eta_con", c.mpc.eta_con);
      s.number("gamma_min", c.mpc.gamma_min);
      s.number("gamma_max", c.mpc.gamma_max);
    });
    section(r, "initial", [&](ObjectReader& s) {
      s.optional_number("e_bat_wh", c.initial_e_bat_wh);
      s.number("t_fridge_c", c.initial_t_fridge_c);
    });
    section(r, "metrics", [&](ObjectReader& s) {
      s.number("violation_tol_c", c.violation_tol_c);
    });
    section(r, "forecast", [&](ObjectReader& s) {
      s.number("noise_std_wh", c.forecast_noise_std_wh);
      s.unsigned64("seed", c.forecast_seed);
    });
  }
  if (!(step_minutes_value > 0.0)) throw DataError("step must be positive");
  c.step_hours = step_minutes_value / 60.0;
  c.validate();
  return c;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string serialize_config(const SystemConfig& c) {
  double minutes = c.step_hours * 60.0;
  if (std::abs(minutes - std::round(minutes)) < 1e-9) minutes = std::round(minutes);
  json j;
  j["step_minutes"] = minutes;
  j["horizon_steps"] = c.horizon_steps;
  j["inverter_efficiency"] = c.inverter_efficiency;
  j["pv"] = {{"n_panels", c.pv.n_panels},
             {"p_rated_w", c.pv.p_rated_w},
             {"gamma_pct_per_c", c.pv.gamma_pct_per_c},
             {"g_std_w_m2", c.pv.g_std_w_m2},
             {"t_std_c", c.pv.t_std_c},
             {"u0_w_m2k", c.pv.u0_w_m2k},
             {"u1_w_m2k_per_ms", c.pv.u1_w_m2k_per_ms},
             {"faiman_literal", c.pv.faiman_literal}};
  j["battery"] = {{"e_min_wh", c.battery.e_min_wh},
                  {"e_max_wh", c.battery.e_max_wh},
                  {"e_charge_max_wh", c.battery.e_charge_max_wh},
                  {"e_discharge_max_wh", c.battery.e_discharge_max_wh},
                  {"eta_charge", c.battery.eta_charge},
                  {"eta_discharge", c.battery.eta_discharge},
                  {"fast_multiplier", c.battery.fast_multiplier}};
  j["fridge"] = {{"c_thermal_j_per_c", c.fridge.c_thermal_j_per_c},
                 {"r_thermal_c_per_w", c.fridge.r_thermal_c_per_w},
                 {"cop", c.fridge.cop},
                 {"p_rated_w", c.fridge.p_rated_w},
                 {"t_min_c", c.fridge.t_min_c},
                 {"t_max_c", c.fridge.t_max_c}};
  j["loads"] = {{"light_windows", windows_json(c.loads.light_windows)},
                {"fan_windows", windows_json(c.loads.fan_windows)},
                {"n_lights", c.loads.n_lights},
                {"p_light_w", c.loads.p_light_w},
                {"n_fans", c.loads.n_fans},
                {"p_fan_w", c.loads.p_fan_w}};
  j["mpc"] = {{"lambda1", c.mpc.lambda1},     {"lambda2", c.mpc.lambda2},
              {"lambda3", c.mpc.lambda3},     {"lambda4", c.mpc.lambda4},
              {"eta_con", c.mpc.eta_con},     {"gamma_min", c.mpc.gamma_min},
              {"gamma_max", c.mpc.gamma_max}};
  j["initial"] = {{"e_bat_wh", c.initial_e_bat_wh
                                   ? json(*c.initial_e_bat_wh)
                                   : json(nullptr)},
                  {"t_fridge_c", c.initial_t_fridge_c}};
  j["metrics"] = {{"violation_tol_c", c.violation_tol_c}};
  j["forecast"] = {{"noise_std_wh", c.forecast_noise_std_wh},
                   {"seed", c.forecast_seed}};
  return j.dump(2) + "\n";
}

}  // namespace pvmpc
