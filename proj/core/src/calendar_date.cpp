#include "rrqa/calendar_date.hpp"

#include "rrqa/errors.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <ctime>

namespace rrqa {

namespace {

constexpr std::array<const char*, 12> kMonths = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

template <typename T>
bool parse_number(std::string_view s, T& out) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

CalendarDate::CalendarDate(int year, unsigned month, unsigned day)
    : ymd_{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}} {
    if (!ymd_.ok()) {
        throw ValidationError("invalid calendar date: " + std::to_string(year) + "-" +
                              std::to_string(month) + "-" + std::to_string(day));
    }
}

CalendarDate CalendarDate::parse(std::string_view iso) {
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' || !parse_number(iso.substr(0, 4), y) ||
        !parse_number(iso.substr(5, 2), m) || !parse_number(iso.substr(8, 2), d)) {
        throw ValidationError("expected a YYYY-MM-DD date, got '" + std::string(iso) + "'");
    }
    return CalendarDate(y, m, d);
}

std::string CalendarDate::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
    return buf;
}

std::string CalendarDate::month_year() const {
    return std::string(kMonths[month() - 1]) + " " + std::to_string(year());
}

std::string rfc3339(std::chrono::system_clock::time_point tp) {
    using namespace std::chrono;
    const auto secs = time_point_cast<seconds>(tp);
    const auto ms = duration_cast<milliseconds>(tp - secs).count();
    const std::time_t t = system_clock::to_time_t(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
    return buf;
}

}  // namespace rrqa
