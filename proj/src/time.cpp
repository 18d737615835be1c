#include "pvmpc/time.hpp"

#include <cmath>
#include <cstdio>

#include "pvmpc/error.hpp"

namespace pvmpc {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Timestamp Timestamp::from_civil(int year, unsigned month, unsigned day,
                                int hour, int minute) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                           std::chrono::day{day}};
  if (!ymd.ok()) throw DataError("invalid calendar date");
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59) {
    throw DataError("invalid time of day");
  }
  const auto days_since = sys_days{ymd}.time_since_epoch().count();
  return Timestamp(static_cast<std::int64_t>(days_since) * kMinutesPerDay +
                   hour * 60 + minute);
}

Timestamp Timestamp::parse(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char sep = 0;
  const std::string buf(text);
  const int n = std::sscanf(buf.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d,
                            &sep, &h, &mi, &s);
  if (n < 6 || (sep != 'T' && sep != ' ') || mo < 1 || d < 1) {
    throw DataError("unparsable timestamp '" + buf + "'");
  }
  return from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d), h,
                    mi);
}

std::string Timestamp::to_string() const {
  using namespace std::chrono;
  const sys_days day{days{day_index()}};
  const year_month_day ymd{day};
  const int mod = minute_of_day();
  char out[32];
  std::snprintf(out, sizeof out, "%04d-%02u-%02uT%02d:%02d",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), mod / 60, mod % 60);
  return out;
}

int Timestamp::minute_of_day() const {
  return static_cast<int>(minutes_ - day_index() * kMinutesPerDay);
}

std::int64_t Timestamp::day_index() const {
  return floor_div(minutes_, kMinutesPerDay);
}

std::int64_t step_minutes(double step_hours) {
  const double m = step_hours * 60.0;
  const double r = std::round(m);
  if (!(step_hours > 0.0) || std::abs(m - r) > 1e-6 || r < 1.0) {
    throw DataError("step must be a positive whole number of minutes");
  }
  return static_cast<std::int64_t>(r);
}

}  // namespace pvmpc
