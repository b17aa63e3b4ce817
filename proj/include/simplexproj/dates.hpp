#pragma once

#include <compare>
#include <cstdio>
#include <string>

#include "simplexproj/errors.hpp"

namespace simplexproj {

/// Calendar day. Comparison is field-wise, which matches chronological
/// order for valid dates.
struct Date {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..31

    auto operator<=>(const Date&) const = default;
};

inline bool is_leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline int days_in_month(int y, int m) {
    static constexpr int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap_year(y)) return 29;
    return lengths[m - 1];
}

/// Strict ISO-8601 day parser (YYYY-MM-DD, real calendar day required).
inline Date parse_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        throw ParseError("invalid date '" + s + "': expected YYYY-MM-DD");
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (s[i] < '0' || s[i] > '9')
            throw ParseError("invalid date '" + s + "': expected YYYY-MM-DD");
    Date d;
    d.year = std::stoi(s.substr(0, 4));
    d.month = std::stoi(s.substr(5, 2));
    d.day = std::stoi(s.substr(8, 2));
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month))
        throw ParseError("invalid date '" + s + "': no such calendar day");
    return d;
}

inline std::string to_string(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

inline Date month_end(int y, int m) { return Date{y, m, days_in_month(y, m)}; }

/// First month-end at or after d, then step with next_month_end.
inline Date next_month_end(const Date& d) {
    if (d.month == 12) return month_end(d.year + 1, 1);
    return month_end(d.year, d.month + 1);
}

} // namespace simplexproj
