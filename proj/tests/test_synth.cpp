#include <filesystem>

#include "doctest.h"
#include "pvmpc/error.hpp"
#include "pvmpc/synth.hpp"

using namespace pvmpc;

namespace {

double day_energy(const WeatherSeries& w, int day) {
  double sum = 0.0;
  for (std::size_t k = day * 144; k < (day + 1) * 144u; ++k) {
    sum += w.records[k].ghi_w_m2 / 6.0;
  }
  return sum;
}

}  // namespace

TEST_CASE("synthetic weather is reproducible") {
  SynthOptions o;
  o.profile = WeatherProfile::kCloudy;
  const auto a = synth_weather(o);
  const auto b = synth_weather(o);
  REQUIRE(a.records.size() == 7 * 144);
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].ghi_w_m2 == b.records[k].ghi_w_m2);
    CHECK(a.records[k].t_ambient_c == b.records[k].t_ambient_c);
    CHECK(a.records[k].wind_m_s == b.records[k].wind_m_s);
  }
  o.seed = 2;
  const auto c = synth_weather(o);
  bool differs = false;
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    differs = differs || a.records[k].ghi_w_m2 != c.records[k].ghi_w_m2;
  }
  CHECK(differs);
}

TEST_CASE("nights are dark and days are bounded") {
  SynthOptions o;
  o.days = 2;
  const auto w = synth_weather(o);
  CHECK(w.records.front().timestamp == o.start);
  for (const auto& r : w.records) {
    const int minute = r.timestamp.minute_of_day();
    if (minute < 6 * 60 || minute >= 18 * 60) CHECK(r.ghi_w_m2 == 0.0);
    CHECK(r.ghi_w_m2 >= 0.0);
    CHECK(r.ghi_w_m2 <= 900.0);
    CHECK(r.wind_m_s >= 0.0);
  }
  CHECK(day_energy(w, 0) == doctest::Approx(day_energy(w, 1)));
  // A half sine of peak 900 over 12 h.
  CHECK(day_energy(w, 0) == doctest::Approx(900.0 * 12.0 * 2.0 / 3.14159265).epsilon(1e-3));
}

TEST_CASE("the post-storm week clears up") {
  SynthOptions o;
  o.profile = WeatherProfile::kPostStorm;
  const auto w = synth_weather(o);
  CHECK(day_energy(w, 0) < day_energy(w, 1));
  CHECK(day_energy(w, 1) < day_energy(w, 3));
  CHECK(day_energy(w, 0) < 0.25 * day_energy(w, 5));
}

TEST_CASE("profiles by name and CSV round-trip") {
  CHECK(parse_profile("post-storm") == WeatherProfile::kPostStorm);
  CHECK(std::string(to_string(WeatherProfile::kCloudy)) == "cloudy");
  CHECK_THROWS_AS(parse_profile("rainy"), DataError);
  SynthOptions o;
  o.days = 1;
  o.profile = WeatherProfile::kCloudy;
  const auto w = synth_weather(o);
  const auto path = std::filesystem::temp_directory_path() / "pvmpc_synth.csv";
  write_weather_csv(path, w);
  const auto back = parse_weather_csv(path, 1.0 / 6.0);
  REQUIRE(back.records.size() == w.records.size());
  for (std::size_t k = 0; k < w.records.size(); ++k) {
    CHECK(back.records[k].timestamp == w.records[k].timestamp);
    CHECK(back.records[k].ghi_w_m2 == doctest::Approx(w.records[k].ghi_w_m2));
  }
  std::filesystem::remove(path);
}
