#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

namespace leochan {

inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kMinutesPerDay = 1440.0;
inline constexpr double kJulianDateJ2000 = 2451545.0;
/// TT − UTC for the ΔAT = 37 s era.
inline constexpr double kTtMinusUtcSeconds = 69.184;

namespace detail {

// Days from 1970-01-01 to the given proleptic Gregorian civil date.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d)
{
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Civil {
    std::int64_t y;
    unsigned m;
    unsigned d;
};

constexpr Civil civil_from_days(std::int64_t z)
{
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return {y + (m <= 2), m, d};
}

// 2000-01-01T12:00 UTC expressed in days since the Unix epoch.
inline constexpr double kJ2000DaysFromUnix = 10957.5;

} // namespace detail

/// A UTC instant stored as days since J2000.0 (2000-01-01 12:00).
///
/// Days-since-J2000 keeps about 0.2 µs resolution for dates in this century,
/// which finite-difference range-rate checks rely on. A raw Julian date in a
/// double would only resolve ~40 µs.
class Instant {
public:
    constexpr Instant() = default;

    static constexpr Instant from_days_since_j2000(double days) { return Instant(days); }

    static Instant from_julian_date(double jd) { return Instant(jd - kJulianDateJ2000); }

    /// `day_of_year` is 1-based and fractional, as in TLE epochs (1.0 = Jan 1 00:00).
    static Instant from_year_and_day(int year, double day_of_year)
    {
        const auto jan1 = detail::days_from_civil(year, 1, 1);
        return Instant(static_cast<double>(jan1) - detail::kJ2000DaysFromUnix + (day_of_year - 1.0));
    }

    static Instant from_calendar(int year, unsigned month, unsigned day, int hour = 0, int minute = 0,
                                 double second = 0.0)
    {
        const auto d = detail::days_from_civil(year, month, day);
        return Instant(static_cast<double>(d) - detail::kJ2000DaysFromUnix +
                       (hour * 3600.0 + minute * 60.0 + second) / kSecondsPerDay);
    }

    constexpr double days_since_j2000() const { return days_; }
    double julian_date() const { return days_ + kJulianDateJ2000; }

    /// Julian centuries of Terrestrial Time since J2000.
    double tt_centuries() const { return (days_ + kTtMinusUtcSeconds / kSecondsPerDay) / 36525.0; }

    constexpr Instant plus_seconds(double s) const { return Instant(days_ + s / kSecondsPerDay); }
    constexpr Instant plus_minutes(double m) const { return Instant(days_ + m / kMinutesPerDay); }

    constexpr double minutes_since(const Instant& o) const { return (days_ - o.days_) * kMinutesPerDay; }
    constexpr double seconds_since(const Instant& o) const { return (days_ - o.days_) * kSecondsPerDay; }

    /// ISO-8601 UTC with millisecond precision.
    std::string iso8601() const
    {
        const double unix_days = days_ + detail::kJ2000DaysFromUnix;
        auto day = static_cast<std::int64_t>(std::floor(unix_days));
        auto ms = static_cast<std::int64_t>(std::llround((unix_days - static_cast<double>(day)) * 86400000.0));
        if (ms >= 86400000) {
            ms -= 86400000;
            ++day;
        }
        const auto c = detail::civil_from_days(day);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ", static_cast<long long>(c.y),
                      c.m, c.d, static_cast<long long>(ms / 3600000), static_cast<long long>(ms / 60000 % 60),
                      static_cast<long long>(ms / 1000 % 60), static_cast<long long>(ms % 1000));
        return buf;
    }

    friend constexpr auto operator<=>(const Instant&, const Instant&) = default;

private:
    constexpr explicit Instant(double days) : days_(days) {}
    double days_{0.0};
};

} // namespace leochan
