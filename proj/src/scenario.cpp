#include "pvmpc/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "pvmpc/error.hpp"

namespace pvmpc {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CsvTable {
  std::map<std::string, std::size_t> columns;
  struct Row {
    std::size_t line = 0;
    std::vector<std::string_view> cells;
  };
  std::vector<Row> rows;
};

CsvTable read_table(std::string_view text, std::string_view origin) {
  CsvTable table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool have_header = false;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') {
      if (nl == text.size()) break;
      continue;
    }
    auto cells = split_csv(line);
    if (!have_header) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        table.columns[lower(cells[i])] = i;
      }
      have_header = true;
    } else {
      table.rows.push_back({line_no, std::move(cells)});
    }
    if (nl == text.size()) break;
  }
  if (!have_header || table.rows.empty()) {
    throw DataError(std::string(origin) + ": no records");
  }
  return table;
}

std::size_t require_column(const CsvTable& t, const std::string& name,
                           std::string_view origin) {
  const auto it = t.columns.find(name);
  if (it == t.columns.end()) {
    throw DataError(std::string(origin) + ": missing column '" + name + "'");
  }
  return it->second;
}

std::string at_line(std::string_view origin, std::size_t line) {
  return std::string(origin) + " at line " + std::to_string(line);
}

double cell_value(const CsvTable::Row& row, std::size_t col,
                  std::string_view origin) {
  double v = 0.0;
  if (col >= row.cells.size() || !parse_double(row.cells[col], v)) {
    throw DataError("unparsable row: " + at_line(origin, row.line));
  }
  return v;
}

// Average of a piecewise-constant signal (value i holds on [i*src, (i+1)*src))
// over [from, to), times in minutes relative to the first sample.
double interval_average(const std::vector<double>& values, std::int64_t src,
                        std::int64_t from, std::int64_t to) {
  double acc = 0.0;
  std::int64_t i = from / src;
  std::int64_t t = from;
  while (t < to) {
    const std::int64_t seg_end = std::min(to, (i + 1) * src);
    acc += values[static_cast<std::size_t>(i)] * static_cast<double>(seg_end - t);
    t = seg_end;
    ++i;
  }
  return acc / static_cast<double>(to - from);
}

double interpolate(const std::vector<double>& values, std::int64_t src,
                   std::int64_t at) {
  const auto n = static_cast<std::int64_t>(values.size());
  const std::int64_t i = at / src;
  if (i >= n - 1) return values.back();
  const double frac = static_cast<double>(at - i * src) / static_cast<double>(src);
  return values[static_cast<std::size_t>(i)] * (1.0 - frac) +
         values[static_cast<std::size_t>(i + 1)] * frac;
}

}  // namespace

WeatherSeries parse_weather_text(std::string_view text, double step_hours,
                                 std::optional<std::size_t> required_records,
                                 std::string_view origin) {
  const std::int64_t step = step_minutes(step_hours);
  const CsvTable table = read_table(text, origin);
  const std::size_t c_ts = require_column(table, "timestamp", origin);
  const std::size_t c_ghi = require_column(table, "ghi", origin);
  const std::size_t c_temp = require_column(table, "air_temperature", origin);
  const std::size_t c_wind = require_column(table, "wind_speed", origin);

  std::vector<Timestamp> stamps;
  std::vector<double> ghi, temp, wind;
  for (const auto& row : table.rows) {
    if (c_ts >= row.cells.size()) {
      throw DataError("unparsable row: " + at_line(origin, row.line));
    }
    Timestamp ts;
    try {
      ts = Timestamp::parse(row.cells[c_ts]);
    } catch (const DataError&) {
      throw DataError("unparsable row: " + at_line(origin, row.line));
    }
    const double g = cell_value(row, c_ghi, origin);
    const double ta = cell_value(row, c_temp, origin);
    const double ws = cell_value(row, c_wind, origin);
    if (g < 0.0) {
      throw DataError("negative irradiance " + at_line(origin, row.line));
    }
    if (ws < 0.0) {
      throw DataError("negative wind speed " + at_line(origin, row.line));
    }
    if (!stamps.empty() && ts <= stamps.back()) {
      throw DataError("non-monotonic timestamps " + at_line(origin, row.line));
    }
    if (stamps.size() >= 2) {
      const auto expected = stamps[1].minutes() - stamps[0].minutes();
      if (ts.minutes() - stamps.back().minutes() != expected) {
        throw DataError("irregular time step " + at_line(origin, row.line));
      }
    }
    stamps.push_back(ts);
    ghi.push_back(g);
    temp.push_back(ta);
    wind.push_back(ws);
  }

  // A single record is taken to span one simulation step.
  const std::int64_t src =
      stamps.size() >= 2 ? stamps[1].minutes() - stamps[0].minutes() : step;
  if (src % step != 0 && step % src != 0) {
    throw DataError(std::string(origin) + ": source step of " +
                    std::to_string(src) +
                    " min neither divides nor is a multiple of the " +
                    std::to_string(step) + " min simulation step");
  }
  const std::int64_t span = src * static_cast<std::int64_t>(stamps.size());
  const auto n_out = static_cast<std::size_t>(span / step);
  if (required_records && n_out < *required_records) {
    throw DataError(std::string(origin) +
                    ": coverage shorter than requested window (" +
                    std::to_string(n_out) + " < " +
                    std::to_string(*required_records) + " steps)");
  }

  WeatherSeries series;
  series.step_minutes = step;
  series.records.reserve(n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    const std::int64_t t0 = static_cast<std::int64_t>(j) * step;
    WeatherRecord r;
    r.timestamp = stamps.front().plus_minutes(t0);
    r.ghi_w_m2 = interval_average(ghi, src, t0, t0 + step);
    r.t_ambient_c = interpolate(temp, src, t0);
    r.wind_m_s = interpolate(wind, src, t0);
    series.records.push_back(r);
  }
  return series;
}

WeatherSeries parse_weather_csv(const std::filesystem::path& path,
                                double step_hours,
                                std::optional<std::size_t> required_records) {
  return parse_weather_text(read_file(path), step_hours, required_records,
                            path.string());
}

void write_weather_csv(const std::filesystem::path& path,
                       const WeatherSeries& series) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "timestamp,ghi,air_temperature,wind_speed\n";
  char buf[128];
  for (const auto& r : series.records) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f\n",
                  r.timestamp.to_string().c_str(), r.ghi_w_m2, r.t_ambient_c,
                  r.wind_m_s);
    out << buf;
  }
}

DailyWindow DailyWindow::parse(std::string_view text) {
  int h0 = 0, m0 = 0, h1 = 0, m1 = 0;
  char tail = 0;
  const std::string buf(trim(text));
  if (std::sscanf(buf.c_str(), "%d:%d-%d:%d%c", &h0, &m0, &h1, &m1, &tail) !=
      4) {
    throw DataError("window '" + buf + "' is not of the form HH:MM-HH:MM");
  }
  const auto ok = [](int h, int m) {
    return h >= 0 && m >= 0 && m < 60 && (h < 24 || (h == 24 && m == 0));
  };
  if (!ok(h0, m0) || !ok(h1, m1)) {
    throw DataError("window '" + buf + "' lies outside 00:00-24:00");
  }
  DailyWindow w{h0 * 60 + m0, h1 * 60 + m1};
  // "24:00" as a start is the same instant as "00:00".
  if (w.start_min == kMinutesPerDay) w.start_min = 0;
  // Ending at midnight is written either way.
  if (w.end_min == 0 && w.start_min > 0) w.end_min = kMinutesPerDay;
  return w;
}

std::string DailyWindow::to_string() const {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02d:%02d-%02d:%02d", start_min / 60,
                start_min % 60, end_min / 60, end_min % 60);
  return buf;
}

bool DailyWindow::contains(int minute_of_day) const {
  if (start_min == end_min) return false;
  if (start_min < end_min) {
    return minute_of_day >= start_min && minute_of_day < end_min;
  }
  return minute_of_day >= start_min || minute_of_day < end_min;
}

void SecondaryLoadSchedule::validate() const {
  if (n_lights < 0 || n_fans < 0) {
    throw DataError("loads: counts must be >= 0");
  }
  if (p_light_w < 0.0 || p_fan_w < 0.0) {
    throw DataError("loads: powers must be >= 0");
  }
  for (const auto* list : {&light_windows, &fan_windows}) {
    for (const auto& w : *list) {
      if (w.start_min < 0 || w.start_min >= kMinutesPerDay || w.end_min < 0 ||
          w.end_min > kMinutesPerDay) {
        throw DataError("loads: window outside 00:00-24:00");
      }
    }
  }
}

namespace {

bool any_contains(const std::vector<DailyWindow>& ws, int mod) {
  return std::any_of(ws.begin(), ws.end(),
                     [mod](const DailyWindow& w) { return w.contains(mod); });
}

}  // namespace

std::vector<double> build_secondary_profile(
    const SecondaryLoadSchedule& schedule, const std::vector<Timestamp>& grid,
    double step_hours) {
  std::vector<double> out;
  out.reserve(grid.size());
  const double lights_w = schedule.n_lights * schedule.p_light_w;
  const double fans_w = schedule.n_fans * schedule.p_fan_w;
  for (const auto& t : grid) {
    const int mod = t.minute_of_day();
    double w = 0.0;
    if (any_contains(schedule.light_windows, mod)) w += lights_w;
    if (any_contains(schedule.fan_windows, mod)) w += fans_w;
    out.push_back(w * step_hours);
  }
  return out;
}

double secondary_daily_energy(const SecondaryLoadSchedule& schedule) {
  // Minute resolution is exact for HH:MM windows.
  const auto grid = make_grid(Timestamp(0), 1, kMinutesPerDay);
  const auto prof = build_secondary_profile(schedule, grid, 1.0 / 60.0);
  double sum = 0.0;
  for (double e : prof) sum += e;
  return sum;
}

HouseTemperatureTrace sinusoid_house_trace(Timestamp start,
                                           std::int64_t step_minutes,
                                           std::size_t n, double mean_c,
                                           double amplitude_c,
                                           double peak_hour) {
  HouseTemperatureTrace trace;
  trace.timestamps = make_grid(start, step_minutes, n);
  trace.t_house_c.reserve(n);
  for (const auto& t : trace.timestamps) {
    const double hour = t.minute_of_day() / 60.0;
    trace.t_house_c.push_back(
        mean_c +
        amplitude_c * std::cos(2.0 * std::numbers::pi * (hour - peak_hour) / 24.0));
  }
  return trace;
}

HouseTemperatureTrace load_house_trace(const std::filesystem::path& path) {
  const std::string origin = path.string();
  const CsvTable table = read_table(read_file(path), origin);
  const std::size_t c_ts = require_column(table, "timestamp", origin);
  const std::size_t c_t = require_column(table, "t_house", origin);
  HouseTemperatureTrace trace;
  for (const auto& row : table.rows) {
    Timestamp ts;
    try {
      ts = Timestamp::parse(c_ts < row.cells.size() ? row.cells[c_ts] : "");
    } catch (const DataError&) {
      throw DataError("unparsable row: " + at_line(origin, row.line));
    }
    if (!trace.timestamps.empty() && ts <= trace.timestamps.back()) {
      throw DataError("non-monotonic timestamps " + at_line(origin, row.line));
    }
    trace.timestamps.push_back(ts);
    trace.t_house_c.push_back(cell_value(row, c_t, origin));
  }
  return trace;
}

std::vector<double> align_house_trace(const HouseTemperatureTrace& trace,
                                      const std::vector<Timestamp>& grid) {
  if (trace.size() == 0) throw DataError("house temperature trace is empty");
  std::vector<double> out;
  out.reserve(grid.size());
  const auto& ts = trace.timestamps;
  for (Timestamp t : grid) {
    if (t < ts.front()) {
      throw DataError("house temperature trace starts after " + t.to_string());
    }
    while (t > ts.back()) t = t.plus_minutes(-kMinutesPerDay);
    if (t < ts.front()) {
      // Between the last sample and the first one a day later.
      const Timestamp wrap = ts.front().plus_minutes(kMinutesPerDay);
      const Timestamp late = t.plus_minutes(kMinutesPerDay);
      const double frac = static_cast<double>(late.minutes() - ts.back().minutes()) /
                          static_cast<double>(wrap.minutes() - ts.back().minutes());
      out.push_back(trace.t_house_c.back() * (1.0 - frac) + trace.t_house_c.front() * frac);
      continue;
    }
    const auto hi = std::lower_bound(ts.begin(), ts.end(), t);
    const auto i = static_cast<std::size_t>(hi - ts.begin());
    if (*hi == t) {
      out.push_back(trace.t_house_c[i]);
      continue;
    }
    const double span = static_cast<double>(ts[i].minutes() - ts[i - 1].minutes());
    const double frac = static_cast<double>(t.minutes() - ts[i - 1].minutes()) / span;
    out.push_back(trace.t_house_c[i - 1] * (1.0 - frac) + trace.t_house_c[i] * frac);
  }
  return out;
}

std::vector<Timestamp> make_grid(Timestamp start, std::int64_t step_minutes,
                                 std::size_t n) {
  std::vector<Timestamp> grid;
  grid.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    grid.push_back(start.plus_minutes(static_cast<std::int64_t>(k) * step_minutes));
  }
  return grid;
}

WeatherSeries extend_repeating_last_day(const WeatherSeries& series,
                                        std::size_t total) {
  if (series.empty()) throw DataError("cannot extend an empty weather series");
  WeatherSeries out = series;
  if (out.size() >= total) return out;
  const auto per_day =
      static_cast<std::size_t>(kMinutesPerDay / series.step_minutes);
  const std::size_t day_len = std::min(per_day, series.size());
  const std::size_t first = series.size() - day_len;
  std::size_t i = 0;
  while (out.size() < total) {
    WeatherRecord r = series.records[first + (i % day_len)];
    r.timestamp = out.records.back().timestamp.plus_minutes(series.step_minutes);
    out.records.push_back(r);
    ++i;
  }
  return out;
}

}  // namespace pvmpc
