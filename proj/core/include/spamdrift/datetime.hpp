// datetime.hpp
//
// Civil date arithmetic, ISO-8601 week numbering and the two date
// formats that occur in mail archives (RFC 2822 Date headers and
// asctime-style mbox envelope dates).  Timestamps are UTC unix
// seconds throughout.

#ifndef SPAMDRIFT_DATETIME_HPP
#define SPAMDRIFT_DATETIME_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace spamdrift {

/// earliest timestamp accepted by ingestion (1990-01-01T00:00:00Z)
inline constexpr std::int64_t kMinTimestamp = 631152000;

struct CivilDate {
    int year;
    unsigned month;  // 1..12
    unsigned day;    // 1..31
};

/// days since 1970-01-01 for a proleptic Gregorian civil date
std::int64_t days_from_civil(int year, unsigned month, unsigned day);

CivilDate civil_from_days(std::int64_t days);

/// ISO day of week, 1=Monday .. 7=Sunday
int weekday_from_days(std::int64_t days);

/// identifies one ISO-8601 week (Monday start); the ISO year may
/// differ from the calendar year near January 1st
struct WeekKey {
    int year = 0;
    int week = 0;  // 1..53

    auto operator<=>(const WeekKey&) const = default;

    /// "2002-W07" style label
    std::string label() const;
};

WeekKey iso_week_from_timestamp(std::int64_t ts);

/// 52 or 53
int iso_weeks_in_year(int year);

WeekKey next_week(WeekKey w);

/// unix timestamp of the Monday 00:00:00 UTC starting the given week
std::int64_t week_start_timestamp(WeekKey w);

/// parses an RFC 2822 Date header value, e.g.
/// "Tue, 08 Jan 2002 11:22:33 +0100".  Tolerates missing weekday,
/// missing seconds, two-digit years, named zones and trailing
/// comments.  Returns nothing if the value cannot be understood.
std::optional<std::int64_t> parse_rfc2822_date(std::string_view value);

/// parses the asctime-style date of an mbox envelope line, e.g.
/// "Tue Jan  8 11:22:33 2002".  No zone information exists in this
/// format; the instant is taken as UTC.
std::optional<std::int64_t> parse_asctime_date(std::string_view value);

/// formats a timestamp as an RFC 2822 date with +0000 zone
std::string format_rfc2822(std::int64_t ts);

/// formats a timestamp as an asctime date for mbox envelope lines
std::string format_asctime(std::int64_t ts);

}  // namespace spamdrift

#endif  // SPAMDRIFT_DATETIME_HPP
