#pragma once

#include <cstdint>
#include <string>

#include "pvmpc/scenario.hpp"

namespace pvmpc {

enum class WeatherProfile { kClear, kCloudy, kPostStorm };

const char* to_string(WeatherProfile profile);
WeatherProfile parse_profile(const std::string& name);

struct SynthOptions {
  int days = 7;
  WeatherProfile profile = WeatherProfile::kClear;
  std::uint64_t seed = 1;
  std::int64_t step_minutes = 10;
  Timestamp start = Timestamp::from_civil(2017, 9, 11, 0, 0);
};

// Daytime irradiance follows a half sine between 06:00 and 18:00 (exactly zero
// at night) scaled by a per-day peak and per-step cloud attenuation.
//   clear:      peak 900 W/m2, no clouds
//   cloudy:     peak 900 W/m2 attenuated to 30-60 % with step-level noise
//   post-storm: day 1 overcast (peak 150), day 2 broken cloud (peak 450),
//               then clearing (peak 800-900, light clouds)
WeatherSeries synth_weather(const SynthOptions& options);

}  // namespace pvmpc
