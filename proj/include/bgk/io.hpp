#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace bgk {

// Fixed-width scientific formatting; the writers below never go through
// iostream locale machinery, so identical inputs give identical bytes.
inline std::string fmt_sci(double x) {
    char b[40];
    std::snprintf(b, sizeof b, "%.12e", x);
    return b;
}

struct Cell {
    bool numeric = false;
    double num = 0.0;
    std::string text;
    Cell(double x) : numeric(true), num(x) {}
    Cell(int x) : numeric(true), num(x) {}
    Cell(const char* s) : text(s) {}
    Cell(std::string s) : text(std::move(s)) {}
};

struct Table {
    std::vector<std::string> comments;  // column documentation, '# ' prefixed
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw internal_error("cannot create output directory: " + dir);
}

inline void write_csv(const std::string& path, const Table& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw internal_error("cannot open for writing: " + path);
    for (const auto& c : t.comments) out << "# " << c << "\n";
    for (std::size_t i = 0; i < t.header.size(); ++i)
        out << (i ? "," : "") << t.header[i];
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "");
            if (row[i].numeric)
                out << fmt_sci(row[i].num);
            else
                out << row[i].text;
        }
        out << "\n";
    }
    if (!out) throw internal_error("short write: " + path);
}

}  // namespace bgk
