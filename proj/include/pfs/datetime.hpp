#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pfs {

// Calendar timestamp carried by wrapper tags. No timezone is modeled;
// values are treated as UTC wherever an absolute time is needed.
struct CivilDateTime {
    int year = 1970;
    int month = 1;
    int day = 1;
    int hour = 0;
    int minute = 0;
    int second = 0;
    bool has_time = false;

    friend bool operator==(const CivilDateTime&, const CivilDateTime&) = default;
};

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

inline std::optional<int> to_int(std::string_view s) {
    if (!all_digits(s)) return std::nullopt;
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

inline bool is_leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline int days_in_month(int y, int m) {
    static constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12) return 0;
    if (m == 2 && is_leap_year(y)) return 29;
    return lengths[m - 1];
}

inline bool valid_ymd(int y, int m, int d) {
    return m >= 1 && m <= 12 && d >= 1 && d <= days_in_month(y, m);
}

// Two-digit years pivot at 70: 70..99 -> 19xx, 00..69 -> 20xx.
inline int expand_two_digit_year(int yy) {
    return yy >= 70 ? 1900 + yy : 2000 + yy;
}

inline std::optional<CivilDateTime> parse_date_part(std::string_view s) {
    CivilDateTime out;
    auto dash1 = s.find('-');
    if (dash1 == std::string_view::npos) return std::nullopt;
    auto dash2 = s.find('-', dash1 + 1);
    if (dash2 == std::string_view::npos) return std::nullopt;
    std::string_view a = s.substr(0, dash1);
    std::string_view b = s.substr(dash1 + 1, dash2 - dash1 - 1);
    std::string_view c = s.substr(dash2 + 1);
    if (a.size() == 4) {  // ISO 8601: YYYY-MM-DD
        auto y = to_int(a), m = to_int(b), d = to_int(c);
        if (!y || !m || !d || b.size() != 2 || c.size() != 2) return std::nullopt;
        out.year = *y;
        out.month = *m;
        out.day = *d;
    } else {  // DD-MM-YY
        auto d = to_int(a), m = to_int(b), y = to_int(c);
        if (!d || !m || !y || c.size() != 2 || a.size() > 2 || b.size() > 2) return std::nullopt;
        out.year = expand_two_digit_year(*y);
        out.month = *m;
        out.day = *d;
    }
    if (!valid_ymd(out.year, out.month, out.day)) return std::nullopt;
    return out;
}

// "H:MM:SS AM" / "H:MM:SS PM" (12-hour clock, hour without leading zero)
inline bool parse_am_pm_time(std::string_view s, CivilDateTime& out) {
    if (s.size() < 2) return false;
    std::string_view suffix = s.substr(s.size() - 2);
    bool pm;
    if (suffix == "AM" || suffix == "am") pm = false;
    else if (suffix == "PM" || suffix == "pm") pm = true;
    else return false;
    s.remove_suffix(2);
    if (s.empty() || s.back() != ' ') return false;
    s.remove_suffix(1);
    auto c1 = s.find(':');
    if (c1 == std::string_view::npos) return false;
    auto c2 = s.find(':', c1 + 1);
    if (c2 == std::string_view::npos) return false;
    auto h = to_int(s.substr(0, c1));
    auto m = to_int(s.substr(c1 + 1, c2 - c1 - 1));
    auto sec = to_int(s.substr(c2 + 1));
    if (!h || !m || !sec || *h < 1 || *h > 12 || *m > 59 || *sec > 59) return false;
    if (s.substr(c1 + 1, c2 - c1 - 1).size() != 2 || s.substr(c2 + 1).size() != 2) return false;
    out.hour = (*h % 12) + (pm ? 12 : 0);
    out.minute = *m;
    out.second = *sec;
    out.has_time = true;
    return true;
}

// "HH:MM:SS" (24-hour clock, used with ISO dates)
inline bool parse_iso_time(std::string_view s, CivilDateTime& out) {
    if (s.size() != 8 || s[2] != ':' || s[5] != ':') return false;
    auto h = to_int(s.substr(0, 2));
    auto m = to_int(s.substr(3, 2));
    auto sec = to_int(s.substr(6, 2));
    if (!h || !m || !sec || *h > 23 || *m > 59 || *sec > 59) return false;
    out.hour = *h;
    out.minute = *m;
    out.second = *sec;
    out.has_time = true;
    return true;
}

}  // namespace detail

// Date-only value for the header `date` tag: DD-MM-YY or YYYY-MM-DD.
inline std::optional<CivilDateTime> parse_wrapper_date(std::string_view s) {
    auto parsed = detail::parse_date_part(s);
    if (!parsed) return std::nullopt;
    return parsed;
}

// `created` tag: a date optionally followed by a time of day.
// Accepted: "DD-MM-YY", "DD-MM-YY H:MM:SS AM", "YYYY-MM-DD",
// "YYYY-MM-DDTHH:MM:SS", "YYYY-MM-DD HH:MM:SS".
inline std::optional<CivilDateTime> parse_wrapper_datetime(std::string_view s) {
    bool iso = s.size() >= 4 && detail::all_digits(s.substr(0, 4));
    std::size_t date_len;
    if (iso) {
        date_len = 10;
    } else {
        auto sp = s.find(' ');
        date_len = sp == std::string_view::npos ? s.size() : sp;
    }
    if (date_len > s.size()) return std::nullopt;
    auto date = detail::parse_date_part(s.substr(0, date_len));
    if (!date) return std::nullopt;
    if (date_len == s.size()) return date;
    char sep = s[date_len];
    std::string_view rest = s.substr(date_len + 1);
    if (iso) {
        if (sep != 'T' && sep != ' ') return std::nullopt;
        if (!detail::parse_iso_time(rest, *date)) return std::nullopt;
    } else {
        if (sep != ' ') return std::nullopt;
        if (!detail::parse_am_pm_time(rest, *date)) return std::nullopt;
    }
    return date;
}

// Canonical emission: DD-MM-YY when the year fits the two-digit pivot
// window, ISO 8601 otherwise.
inline std::string format_wrapper_date(const CivilDateTime& t) {
    char buf[16];
    if (t.year >= 1970 && t.year <= 2069) {
        std::snprintf(buf, sizeof buf, "%02d-%02d-%02d", t.day, t.month, t.year % 100);
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", t.year, t.month, t.day);
    }
    return buf;
}

inline std::string format_wrapper_datetime(const CivilDateTime& t) {
    std::string out = format_wrapper_date(t);
    if (!t.has_time) return out;
    char buf[24];
    if (t.year >= 1970 && t.year <= 2069) {
        int h12 = t.hour % 12 == 0 ? 12 : t.hour % 12;
        std::snprintf(buf, sizeof buf, " %d:%02d:%02d %s", h12, t.minute, t.second,
                      t.hour < 12 ? "AM" : "PM");
    } else {
        std::snprintf(buf, sizeof buf, "T%02d:%02d:%02d", t.hour, t.minute, t.second);
    }
    return out + buf;
}

// Days-from-civil-epoch conversion (proleptic Gregorian).
inline std::int64_t civil_to_unix(const CivilDateTime& t) {
    std::int64_t y = t.year;
    std::int64_t m = t.month;
    std::int64_t d = t.day;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const std::int64_t yoe = y - era * 400;
    const std::int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    const std::int64_t days = era * 146097 + doe - 719468;
    return days * 86400 + t.hour * 3600 + t.minute * 60 + t.second;
}

inline CivilDateTime civil_from_unix(std::int64_t secs, bool with_time = true) {
    std::int64_t days = secs / 86400;
    std::int64_t rem = secs % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    std::int64_t z = days + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const std::int64_t doe = z - era * 146097;
    const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    std::int64_t y = yoe + era * 400;
    const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const std::int64_t mp = (5 * doy + 2) / 153;
    const std::int64_t d = doy - (153 * mp + 2) / 5 + 1;
    const std::int64_t m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
    CivilDateTime out;
    out.year = static_cast<int>(y);
    out.month = static_cast<int>(m);
    out.day = static_cast<int>(d);
    if (with_time) {
        out.hour = static_cast<int>(rem / 3600);
        out.minute = static_cast<int>((rem % 3600) / 60);
        out.second = static_cast<int>(rem % 60);
        out.has_time = true;
    }
    return out;
}

}  // namespace pfs
