#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace eclink {

// Calendar date, UTC, day granularity. Timestamps are truncated on parse.
struct Date {
  std::int16_t year = 1970;
  std::uint8_t month = 1;  // 1..12
  std::uint8_t day = 1;    // 1..31

  auto operator<=>(const Date&) const = default;

  // Accepts "YYYY-MM-DD"; anything after the day (e.g. "T12:34:56Z") is dropped.
  static std::optional<Date> parse(std::string_view text);

  static bool valid(int year, int month, int day);
  static int days_in_month(int year, int month);

  // Days since 1970-01-01 (proleptic Gregorian).
  std::int32_t to_days() const;
  static Date from_days(std::int32_t days);

  bool first_of_month() const { return day == 1; }
  bool last_of_month() const { return day == days_in_month(year, month); }

  std::string to_string() const;  // "YYYY-MM-DD"
};

struct YearMonth {
  std::int16_t year = 1970;
  std::uint8_t month = 1;

  auto operator<=>(const YearMonth&) const = default;

  static YearMonth of(const Date& d) { return {d.year, d.month}; }
  YearMonth next() const;
  std::string to_string() const;  // "YYYY-MM"
};

// Inclusive day range of the observation campaign.
struct CollectionWindow {
  Date start_date;
  Date end_date;

  bool contains(const Date& d) const { return start_date <= d && d <= end_date; }
};

}  // namespace eclink
