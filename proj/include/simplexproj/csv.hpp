#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "simplexproj/errors.hpp"

namespace simplexproj {

/// Minimal CSV support: comma-separated, UTF-8, '.' decimal separator, no
/// quoting or embedded commas. Fields are trimmed of surrounding whitespace.
namespace csv {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

/// All lines of a file, without trailing newlines. Throws ParseError when
/// the file cannot be opened.
inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file '" + path + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

inline double parse_number(const std::string& field, std::size_t row_number) {
    const std::string t = trim(field);
    if (t.empty())
        throw ParseError("row " + std::to_string(row_number) + ": empty numeric field");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE)
        throw ParseError("row " + std::to_string(row_number) + ": '" + t +
                         "' is not a number");
    return v;
}

/// 17 significant digits: parsing the text recovers the exact double.
inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace csv
} // namespace simplexproj
