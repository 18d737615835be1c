#include "pvmpc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pvmpc/error.hpp"

namespace pvmpc {

const char* to_string(WeatherProfile profile) {
  switch (profile) {
    case WeatherProfile::kClear: return "clear";
    case WeatherProfile::kCloudy: return "cloudy";
    case WeatherProfile::kPostStorm: return "post-storm";
  }
  return "?";
}

WeatherProfile parse_profile(const std::string& name) {
  if (name == "clear") return WeatherProfile::kClear;
  if (name == "cloudy") return WeatherProfile::kCloudy;
  if (name == "post-storm") return WeatherProfile::kPostStorm;
  throw DataError("unknown weather profile '" + name +
                  "' (clear|cloudy|post-storm)");
}

WeatherSeries synth_weather(const SynthOptions& options) {
  if (options.days < 1) throw DataError("days must be >= 1");
  if (options.step_minutes <= 0 || kMinutesPerDay % options.step_minutes != 0) {
    throw DataError("step must divide one day");
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto per_day = static_cast<std::size_t>(kMinutesPerDay / options.step_minutes);

  WeatherSeries out;
  out.step_minutes = options.step_minutes;
  out.records.reserve(per_day * options.days);
  for (int day = 0; day < options.days; ++day) {
    double peak = 900.0;
    double cloud_lo = 1.0, cloud_hi = 1.0;
    double wind_base = 2.0;
    switch (options.profile) {
      case WeatherProfile::kClear:
        break;
      case WeatherProfile::kCloudy:
        cloud_lo = 0.3;
        cloud_hi = 0.6;
        wind_base = 4.0;
        break;
      case WeatherProfile::kPostStorm:
        if (day == 0) {
          peak = 150.0;
          cloud_lo = 0.8;
          wind_base = 9.0;
        } else if (day == 1) {
          peak = 450.0;
          cloud_lo = 0.6;
          wind_base = 6.0;
        } else {
          peak = 800.0 + 100.0 * unit(rng);
          cloud_lo = 0.85;
          wind_base = 3.0;
        }
        break;
    }
    const double t_mean = 27.0 + (unit(rng) - 0.5);
    double cloud = 0.5 * (cloud_lo + cloud_hi);
    for (std::size_t i = 0; i < per_day; ++i) {
      const double minute = (static_cast<double>(i) + 0.5) * options.step_minutes;
      const double hour = minute / 60.0;
      double ghi = 0.0;
      if (hour > 6.0 && hour < 18.0) {
        ghi = peak * std::sin(std::numbers::pi * (hour - 6.0) / 12.0);
      }
      if (cloud_hi > cloud_lo) {
        // Slowly varying attenuation around the day's range.
        cloud += 0.2 * (cloud_lo + (cloud_hi - cloud_lo) * unit(rng) - cloud);
        ghi *= std::clamp(cloud, cloud_lo, cloud_hi);
      }
      WeatherRecord r;
      r.timestamp = options.start.plus_minutes(
          static_cast<std::int64_t>(day) * kMinutesPerDay +
          static_cast<std::int64_t>(i) * options.step_minutes);
      r.ghi_w_m2 = ghi;
      r.t_ambient_c =
          t_mean + 4.0 * std::cos(2.0 * std::numbers::pi * (hour - 15.0) / 24.0);
      r.wind_m_s = std::max(0.0, wind_base + (unit(rng) - 0.5));
      out.records.push_back(r);
    }
  }
  return out;
}

}  // namespace pvmpc
