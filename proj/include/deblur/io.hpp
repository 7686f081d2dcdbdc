#pragma once

// Plain-text interchange: vectors as one float per line (whitespace separated
// also accepted), tables as comma-separated values with a single header line.

#include <cctype>
#include <cerrno>
#include <charconv>
#include <cstddef>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "deblur/errors.hpp"
#include "deblur/matrix.hpp"

namespace deblur::io {

/// Shortest text that round-trips: 17 significant digits.
inline std::string format_double(double x) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf, static_cast<std::size_t>(len));
}

inline double parse_double(std::string_view token, std::size_t line_no) {
    // from_chars rejects a leading '+'
    std::string_view t = token;
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw IoError("line " + std::to_string(line_no) + ": cannot parse '" + std::string(token) + "' as a number");
    }
    return value;
}

/// Whitespace/newline separated decimal floats, in order.
inline Vector parse_vector(std::istream& in) {
    Vector out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            if (j > i) out.push_back(parse_double(std::string_view(line).substr(i, j - i), line_no));
            i = j;
        }
    }
    return out;
}

inline Vector read_vector_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "': " + std::strerror(errno));
    try {
        return parse_vector(in);
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

inline void write_vector(std::ostream& out, std::span<const double> v) {
    for (double x : v) out << format_double(x) << '\n';
}

inline void write_vector_csv(const std::string& path, std::span<const double> v) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "': " + std::strerror(errno));
    write_vector(out, v);
    if (!out) throw IoError("write failed for '" + path + "'");
}

struct Table {
    std::vector<std::string> headers;
    std::vector<std::vector<double>> rows;
};

inline void write_table(std::ostream& out, std::span<const std::string> headers,
                        std::span<const std::vector<double>> rows) {
    for (const auto& r : rows) {
        if (r.size() != headers.size()) throw InvalidArgument("table row width does not match header");
    }
    for (std::size_t i = 0; i < headers.size(); ++i) out << (i ? "," : "") << headers[i];
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
        out << '\n';
    }
}

inline void write_table_csv(const std::string& path, std::span<const std::string> headers,
                            std::span<const std::vector<double>> rows) {
    for (const auto& r : rows) {
        if (r.size() != headers.size()) throw InvalidArgument("table row width does not match header");
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "': " + std::strerror(errno));
    write_table(out, headers, rows);
    if (!out) throw IoError("write failed for '" + path + "'");
}

inline Table parse_table(std::istream& in) {
    Table t;
    std::string line;
    std::size_t line_no = 0;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    if (!std::getline(in, line)) return t;
    ++line_no;
    t.headers = split(line);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != t.headers.size()) {
            throw IoError("line " + std::to_string(line_no) + ": expected " + std::to_string(t.headers.size()) +
                          " columns, found " + std::to_string(cells.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_double(c, line_no));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline Table read_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "': " + std::strerror(errno));
    return parse_table(in);
}

}  // namespace deblur::io
