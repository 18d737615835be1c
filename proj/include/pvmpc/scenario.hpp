#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pvmpc/time.hpp"

namespace pvmpc {

struct WeatherRecord {
  Timestamp timestamp;
  double ghi_w_m2 = 0.0;
  double t_ambient_c = 0.0;
  double wind_m_s = 0.0;
};

// Uniformly spaced weather on the simulation grid.
struct WeatherSeries {
  std::int64_t step_minutes = 10;
  std::vector<WeatherRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  Timestamp start() const { return records.front().timestamp; }
};

// Reads a weather CSV (header row; columns timestamp, ghi, air_temperature,
// wind_speed in any order, case-insensitive) and resamples it onto a grid of
// `step_hours`. Irradiance is averaged over each grid interval so that the
// integrated energy is conserved; temperature and wind are interpolated
// linearly. When `required_records` is given the file must cover at least that
// many grid steps.
WeatherSeries parse_weather_csv(
    const std::filesystem::path& path, double step_hours,
    std::optional<std::size_t> required_records = std::nullopt);

// Same as parse_weather_csv but from in-memory text; `origin` names the source
// in error messages.
WeatherSeries parse_weather_text(
    std::string_view text, double step_hours,
    std::optional<std::size_t> required_records = std::nullopt,
    std::string_view origin = "<memory>");

void write_weather_csv(const std::filesystem::path& path,
                       const WeatherSeries& series);

// Daily on-interval in local clock minutes. start == end is empty; end may be
// 1440 ("24:00"); start > end wraps past midnight.
struct DailyWindow {
  int start_min = 0;
  int end_min = 0;

  static DailyWindow parse(std::string_view text);  // "HH:MM-HH:MM"
  std::string to_string() const;
  bool contains(int minute_of_day) const;
  bool operator==(const DailyWindow&) const = default;
};

struct SecondaryLoadSchedule {
  std::vector<DailyWindow> light_windows{DailyWindow{18 * 60, 24 * 60}};
  std::vector<DailyWindow> fan_windows{DailyWindow{21 * 60, 9 * 60}};
  int n_lights = 6;
  double p_light_w = 8.0;
  int n_fans = 4;
  double p_fan_w = 65.0;

  void validate() const;
  bool operator==(const SecondaryLoadSchedule&) const = default;
};

// E_s(k) in Wh for each grid instant; a step is on when its start instant lies
// inside a window.
std::vector<double> build_secondary_profile(
    const SecondaryLoadSchedule& schedule, const std::vector<Timestamp>& grid,
    double step_hours);

// Daily energy of the schedule in Wh (used by sizing).
double secondary_daily_energy(const SecondaryLoadSchedule& schedule);

struct HouseTemperatureTrace {
  std::vector<Timestamp> timestamps;
  std::vector<double> t_house_c;

  std::size_t size() const { return t_house_c.size(); }
};

// Fallback when no trace file is supplied: mean + amplitude * cos(2 pi (h -
// peak)/24).
HouseTemperatureTrace sinusoid_house_trace(Timestamp start,
                                           std::int64_t step_minutes,
                                           std::size_t n, double mean_c = 27.0,
                                           double amplitude_c = 3.0,
                                           double peak_hour = 15.0);

// CSV with columns timestamp, t_house (case-insensitive).
HouseTemperatureTrace load_house_trace(const std::filesystem::path& path);

// Linear interpolation of a trace at grid instants. Instants past the end of
// the trace reuse the value one day earlier (the last day repeats); instants
// before its start are a DataError.
std::vector<double> align_house_trace(const HouseTemperatureTrace& trace,
                                      const std::vector<Timestamp>& grid);

std::vector<Timestamp> make_grid(Timestamp start, std::int64_t step_minutes,
                                 std::size_t n);

// Pads the series to `total` records by repeating its last whole day.
WeatherSeries extend_repeating_last_day(const WeatherSeries& series,
                                        std::size_t total);

}  // namespace pvmpc
