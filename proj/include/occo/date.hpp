#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "occo/error.hpp"

namespace occo {

// Calendar date, day granularity. Ordered chronologically.
class Date {
 public:
  constexpr Date() = default;
  constexpr Date(int year, unsigned month, unsigned day)
      : year_(year), month_(month), day_(day) {}

  // Strict YYYY-MM-DD; returns nullopt on anything else, including
  // impossible calendar days.
  static std::optional<Date> try_parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
      return std::nullopt;
    auto digits = [&](std::size_t pos, std::size_t len, int& out) {
      out = 0;
      for (std::size_t i = pos; i < pos + len; ++i) {
        if (text[i] < '0' || text[i] > '9') return false;
        out = out * 10 + (text[i] - '0');
      }
      return true;
    };
    int y = 0, m = 0, d = 0;
    if (!digits(0, 4, y) || !digits(5, 2, m) || !digits(8, 2, d))
      return std::nullopt;
    const std::chrono::year_month_day ymd{
        std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
        std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
  }

  static Date parse(std::string_view text) {
    if (auto d = try_parse(text)) return *d;
    throw Error(errc::kParseError,
                "invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
  }

  static Date today() {
    const auto now = std::chrono::floor<std::chrono::days>(
        std::chrono::system_clock::now());
    const std::chrono::year_month_day ymd{now};
    return Date(static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  }

  // Shifts by a number of days (may be negative).
  Date plus_days(int days) const {
    const std::chrono::sys_days base{std::chrono::year_month_day{
        std::chrono::year{year_}, std::chrono::month{month_},
        std::chrono::day{day_}}};
    const std::chrono::year_month_day ymd{base + std::chrono::days{days}};
    return Date(static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  }

  int days_since_epoch() const {
    const std::chrono::sys_days d{std::chrono::year_month_day{
        std::chrono::year{year_}, std::chrono::month{month_}, std::chrono::day{day_}}};
    return static_cast<int>(d.time_since_epoch().count());
  }

  std::string str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year_, month_, day_);
    return buf;
  }

  constexpr int year() const { return year_; }
  constexpr unsigned month() const { return month_; }
  constexpr unsigned day() const { return day_; }

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  int year_ = 1970;
  unsigned month_ = 1;
  unsigned day_ = 1;
};

}  // namespace occo
