#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace rrqa {

/// A validated Gregorian calendar date. Used as the "as of" anchor that
/// sub-query rewrites are pinned to.
class CalendarDate {
public:
    /// Parses YYYY-MM-DD. Throws ValidationError on malformed or impossible
    /// dates (2023-02-29, 2024-13-01, ...).
    static CalendarDate parse(std::string_view iso);

    CalendarDate(int year, unsigned month, unsigned day);

    int year() const noexcept { return static_cast<int>(ymd_.year()); }
    unsigned month() const noexcept { return static_cast<unsigned>(ymd_.month()); }
    unsigned day() const noexcept { return static_cast<unsigned>(ymd_.day()); }

    std::string iso() const;

    /// "June 2024"
    std::string month_year() const;

    /// "as of June 2024"
    std::string anchor_clause() const { return "as of " + month_year(); }

    friend bool operator==(const CalendarDate&, const CalendarDate&) = default;

private:
    std::chrono::year_month_day ymd_;
};

/// RFC-3339 UTC timestamp with millisecond precision.
std::string rfc3339(std::chrono::system_clock::time_point tp);

}  // namespace rrqa
