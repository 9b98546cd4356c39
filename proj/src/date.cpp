#include "eclink/date.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace eclink {

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

}  // namespace

int Date::days_in_month(int year, int month) {
  static constexpr std::array<int, 13> lengths = {0, 31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12) return 0;
  if (month == 2 && is_leap(year)) return 29;
  return lengths[static_cast<std::size_t>(month)];
}

bool Date::valid(int year, int month, int day) {
  return year >= 1 && year <= 9999 && month >= 1 && month <= 12 && day >= 1 &&
         day <= days_in_month(year, month);
}

std::optional<Date> Date::parse(std::string_view text) {
  // Truncate a time-of-day suffix: "2024-09-30T01:02:03Z" -> "2024-09-30".
  if (auto t = text.find_first_of("T "); t != std::string_view::npos) text = text.substr(0, t);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
      !parse_int(text.substr(8, 2), d))
    return std::nullopt;
  if (!valid(y, m, d)) return std::nullopt;
  return Date{static_cast<std::int16_t>(y), static_cast<std::uint8_t>(m),
              static_cast<std::uint8_t>(d)};
}

// Civil-date conversions after Howard Hinnant's chrono algorithms.
std::int32_t Date::to_days() const {
  std::int32_t y = year;
  const std::int32_t m = month;
  const std::int32_t d = day;
  y -= m <= 2;
  const std::int32_t era = (y >= 0 ? y : y - 399) / 400;
  const std::uint32_t yoe = static_cast<std::uint32_t>(y - era * 400);
  const std::uint32_t doy = static_cast<std::uint32_t>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
  const std::uint32_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int32_t>(doe) - 719468;
}

Date Date::from_days(std::int32_t days) {
  std::int32_t z = days + 719468;
  const std::int32_t era = (z >= 0 ? z : z - 146096) / 146097;
  const std::uint32_t doe = static_cast<std::uint32_t>(z - era * 146097);
  const std::uint32_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int32_t y = static_cast<std::int32_t>(yoe) + era * 400;
  const std::uint32_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::uint32_t mp = (5 * doy + 2) / 153;
  const std::uint32_t d = doy - (153 * mp + 2) / 5 + 1;
  const std::uint32_t m = mp + (mp < 10 ? 3 : static_cast<std::uint32_t>(-9));
  return Date{static_cast<std::int16_t>(y + (m <= 2)), static_cast<std::uint8_t>(m),
              static_cast<std::uint8_t>(d)};
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
  return buf;
}

YearMonth YearMonth::next() const {
  if (month == 12) return {static_cast<std::int16_t>(year + 1), 1};
  return {year, static_cast<std::uint8_t>(month + 1)};
}

std::string YearMonth::to_string() const {
  char buf[12];
  std::snprintf(buf, sizeof(buf), "%04d-%02u", year, month);
  return buf;
}

}  // namespace eclink
