#include "spamdrift/datetime.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <vector>

namespace spamdrift {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

// Howard Hinnant's days_from_civil / civil_from_days
std::int64_t days_from_civil_impl(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);             // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;            // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

const char* kMonthNames[12] = {"jan", "feb", "mar", "apr", "may", "jun",
                               "jul", "aug", "sep", "oct", "nov", "dec"};
const char* kDayNames[7] = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// month token ("Jan", "January") -> 1..12, or 0
int month_from_token(std::string_view tok) {
    if (tok.size() < 3) return 0;
    std::string lo = ascii_lower(tok.substr(0, 3));
    for (int i = 0; i < 12; ++i)
        if (lo == kMonthNames[i]) return i + 1;
    return 0;
}

bool is_weekday_token(std::string_view tok) {
    if (tok.size() < 3) return false;
    std::string lo = ascii_lower(tok.substr(0, 3));
    for (const char* d : kDayNames)
        if (lo == d) return true;
    return false;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

int to_int(std::string_view s) {
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

// RFC 2822 obsolete two/three digit year rule
int expand_year(int year, std::size_t digits) {
    if (digits >= 4) return year;
    if (digits <= 2) return year < 50 ? year + 2000 : year + 1900;
    return year + 1900;
}

// "11:22:33" or "11:22" -> seconds of day
std::optional<int> parse_time_of_day(std::string_view tok) {
    int h = 0, m = 0, s = 0;
    std::size_t i = 0, start = 0;
    std::vector<int> parts;
    for (i = 0; i <= tok.size(); ++i) {
        if (i == tok.size() || tok[i] == ':') {
            std::string_view part = tok.substr(start, i - start);
            if (!all_digits(part) || part.size() > 2) return std::nullopt;
            parts.push_back(to_int(part));
            start = i + 1;
        }
    }
    if (parts.size() < 2 || parts.size() > 3) return std::nullopt;
    h = parts[0];
    m = parts[1];
    s = parts.size() == 3 ? parts[2] : 0;
    if (h > 23 || m > 59 || s > 60) return std::nullopt;
    if (s == 60) s = 59;  // leap second
    return h * 3600 + m * 60 + s;
}

// zone token -> offset in seconds east of UTC
std::optional<int> parse_zone(std::string_view tok) {
    if (tok.empty()) return std::nullopt;
    if ((tok[0] == '+' || tok[0] == '-') && tok.size() == 5 &&
        all_digits(tok.substr(1))) {
        int hh = to_int(tok.substr(1, 2));
        int mm = to_int(tok.substr(3, 2));
        if (hh > 23 || mm > 59) return std::nullopt;
        int off = hh * 3600 + mm * 60;
        return tok[0] == '-' ? -off : off;
    }
    struct Named { const char* name; int off; };
    static constexpr Named named[] = {
        {"ut", 0},   {"gmt", 0},  {"utc", 0},
        {"est", -5 * 3600}, {"edt", -4 * 3600},
        {"cst", -6 * 3600}, {"cdt", -5 * 3600},
        {"mst", -7 * 3600}, {"mdt", -6 * 3600},
        {"pst", -8 * 3600}, {"pdt", -7 * 3600},
    };
    std::string lo = ascii_lower(tok);
    for (const auto& n : named)
        if (lo == n.name) return n.off;
    // single-letter military zones carry no reliable offset (RFC 2822
    // says treat as -0000); alphabetic garbage also lands here
    if (tok.size() == 1 && std::isalpha(static_cast<unsigned char>(tok[0])))
        return 0;
    return std::nullopt;
}

// splits on whitespace and commas; strips ()-comments first
std::vector<std::string> date_tokens(std::string_view value) {
    std::string cleaned;
    int depth = 0;
    for (char c : value) {
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            if (depth > 0) --depth;
        } else if (depth == 0) {
            cleaned += (c == ',') ? ' ' : c;
        }
    }
    std::vector<std::string> toks;
    std::size_t i = 0;
    while (i < cleaned.size()) {
        while (i < cleaned.size() &&
               std::isspace(static_cast<unsigned char>(cleaned[i])))
            ++i;
        std::size_t j = i;
        while (j < cleaned.size() &&
               !std::isspace(static_cast<unsigned char>(cleaned[j])))
            ++j;
        if (j > i) toks.emplace_back(cleaned.substr(i, j - i));
        i = j;
    }
    return toks;
}

std::optional<std::int64_t> assemble(int year, int month, int day,
                                     int seconds_of_day, int zone_offset) {
    if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;
    std::int64_t days = days_from_civil_impl(year, static_cast<unsigned>(month),
                                             static_cast<unsigned>(day));
    return days * kSecondsPerDay + seconds_of_day - zone_offset;
}

}  // namespace

std::int64_t days_from_civil(int year, unsigned month, unsigned day) {
    return days_from_civil_impl(year, month, day);
}

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{static_cast<int>(y + (m <= 2)), m, d};
}

int weekday_from_days(std::int64_t z) {
    // 1970-01-01 was a Thursday (ISO weekday 4)
    std::int64_t wd = (z % 7 + 7) % 7;  // 0 = Thursday
    return static_cast<int>((wd + 3) % 7) + 1;
}

std::string WeekKey::label() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-W%02d", year, week);
    return buf;
}

int iso_weeks_in_year(int year) {
    auto jan1_weekday = [](int y) {
        return weekday_from_days(days_from_civil_impl(y, 1, 1));
    };
    auto is_leap = [](int y) {
        return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    };
    int wd = jan1_weekday(year);
    if (wd == 4) return 53;                  // starts on Thursday
    if (wd == 3 && is_leap(year)) return 53; // leap year starting Wednesday
    return 52;
}

WeekKey iso_week_from_timestamp(std::int64_t ts) {
    std::int64_t days =
        ts >= 0 ? ts / kSecondsPerDay : (ts - kSecondsPerDay + 1) / kSecondsPerDay;
    CivilDate cd = civil_from_days(days);
    std::int64_t jan1 = days_from_civil_impl(cd.year, 1, 1);
    int ordinal = static_cast<int>(days - jan1) + 1;  // 1..366
    int wd = weekday_from_days(days);
    int week = (ordinal - wd + 10) / 7;
    if (week < 1)
        return WeekKey{cd.year - 1, iso_weeks_in_year(cd.year - 1)};
    if (week > iso_weeks_in_year(cd.year))
        return WeekKey{cd.year + 1, 1};
    return WeekKey{cd.year, week};
}

WeekKey next_week(WeekKey w) {
    if (w.week < iso_weeks_in_year(w.year)) return WeekKey{w.year, w.week + 1};
    return WeekKey{w.year + 1, 1};
}

std::int64_t week_start_timestamp(WeekKey w) {
    // January 4th always lies in ISO week 1
    std::int64_t jan4 = days_from_civil_impl(w.year, 1, 4);
    std::int64_t week1_monday = jan4 - (weekday_from_days(jan4) - 1);
    return (week1_monday + static_cast<std::int64_t>(w.week - 1) * 7) *
           kSecondsPerDay;
}

std::optional<std::int64_t> parse_rfc2822_date(std::string_view value) {
    std::vector<std::string> toks = date_tokens(value);
    std::size_t i = 0;
    if (i < toks.size() && is_weekday_token(toks[i]) && !all_digits(toks[i])) ++i;

    // day month year
    if (i + 2 >= toks.size()) return std::nullopt;
    if (!all_digits(toks[i]) || toks[i].size() > 2) return std::nullopt;
    int day = to_int(toks[i]);
    ++i;
    int month = month_from_token(toks[i]);
    if (month == 0) return std::nullopt;
    ++i;
    if (!all_digits(toks[i]) || toks[i].size() > 4) return std::nullopt;
    int year = expand_year(to_int(toks[i]), toks[i].size());
    ++i;

    if (i >= toks.size()) return std::nullopt;
    std::optional<int> tod = parse_time_of_day(toks[i]);
    if (!tod) return std::nullopt;
    ++i;

    int zone = 0;
    if (i < toks.size()) {
        if (std::optional<int> z = parse_zone(toks[i])) zone = *z;
        // unparseable trailing junk is ignored; the date itself stood
    }
    return assemble(year, month, day, *tod, zone);
}

std::optional<std::int64_t> parse_asctime_date(std::string_view value) {
    // expected shape: [weekday] month day time year, with stray zone
    // names tolerated anywhere after the time
    std::vector<std::string> toks = date_tokens(value);
    int month = 0, day = -1, year = -1;
    std::optional<int> tod;
    for (const std::string& t : toks) {
        if (month == 0) {
            if (is_weekday_token(t)) continue;
            month = month_from_token(t);
            if (month != 0) continue;
            return std::nullopt;  // first non-weekday token must be the month
        }
        if (day < 0) {
            if (!all_digits(t) || t.size() > 2) return std::nullopt;
            day = to_int(t);
            continue;
        }
        if (!tod) {
            tod = parse_time_of_day(t);
            if (!tod) return std::nullopt;
            continue;
        }
        if (year < 0 && all_digits(t) && t.size() == 4) {
            year = to_int(t);
            continue;
        }
        // zone names ("MET", "DST") and similar trailing tokens: skip
    }
    if (month == 0 || day < 0 || !tod || year < 0) return std::nullopt;
    return assemble(year, month, day, *tod, 0);
}

std::string format_rfc2822(std::int64_t ts) {
    std::int64_t days = ts / kSecondsPerDay;
    std::int64_t sod = ts % kSecondsPerDay;
    if (sod < 0) {
        sod += kSecondsPerDay;
        --days;
    }
    CivilDate cd = civil_from_days(days);
    int wd = weekday_from_days(days);
    static const char* wdn[7] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
    static const char* mon[12] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                  "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s, %02u %s %04d %02d:%02d:%02d +0000",
                  wdn[wd - 1], cd.day, mon[cd.month - 1], cd.year,
                  static_cast<int>(sod / 3600), static_cast<int>(sod / 60 % 60),
                  static_cast<int>(sod % 60));
    return buf;
}

std::string format_asctime(std::int64_t ts) {
    std::int64_t days = ts / kSecondsPerDay;
    std::int64_t sod = ts % kSecondsPerDay;
    if (sod < 0) {
        sod += kSecondsPerDay;
        --days;
    }
    CivilDate cd = civil_from_days(days);
    int wd = weekday_from_days(days);
    static const char* wdn[7] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
    static const char* mon[12] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                  "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s %s %2u %02d:%02d:%02d %04d", wdn[wd - 1],
                  mon[cd.month - 1], cd.day, static_cast<int>(sod / 3600),
                  static_cast<int>(sod / 60 % 60), static_cast<int>(sod % 60),
                  cd.year);
    return buf;
}

}  // namespace spamdrift
