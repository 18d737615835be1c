#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace pvmpc {

// Naive local wall-clock instant at minute resolution.
class Timestamp {
 public:
  constexpr Timestamp() = default;
  constexpr explicit Timestamp(std::int64_t minutes_since_epoch)
      : minutes_(minutes_since_epoch) {}

  static Timestamp from_civil(int year, unsigned month, unsigned day,
                              int hour = 0, int minute = 0);

  // Accepts "YYYY-MM-DDTHH:MM[:SS]" or with a space separator; seconds are
  // truncated. Throws DataError on malformed input.
  static Timestamp parse(std::string_view text);

  std::string to_string() const;  // "YYYY-MM-DDTHH:MM"

  constexpr std::int64_t minutes() const { return minutes_; }
  // Minutes since local midnight, in [0, 1440).
  int minute_of_day() const;
  // Days since epoch (floor).
  std::int64_t day_index() const;

  constexpr Timestamp plus_minutes(std::int64_t m) const {
    return Timestamp(minutes_ + m);
  }

  constexpr auto operator<=>(const Timestamp&) const = default;

 private:
  std::int64_t minutes_ = 0;
};

constexpr int kMinutesPerDay = 24 * 60;

// Converts a step length in hours to whole minutes; throws if not integral.
std::int64_t step_minutes(double step_hours);

}  // namespace pvmpc
