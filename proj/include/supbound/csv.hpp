#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "supbound/errors.hpp"

namespace supbound::csv {

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt(bool v) { return v ? "true" : "false"; }
inline std::string fmt(std::int64_t v) { return std::to_string(v); }

class Writer {
public:
    explicit Writer(std::ostream& os) : os_(os) {}

    void comment(const std::string& line) { os_ << "# " << line << "\n"; }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ",";
            os_ << cells[i];
        }
        os_ << "\n";
    }

private:
    std::ostream& os_;
};

struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline Table read(std::istream& is) {
    Table t;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.comments.push_back(line);
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        if (!have_header) {
            t.columns = cells;
            have_header = true;
        } else {
            t.rows.push_back(cells);
        }
    }
    return t;
}

inline double to_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw InvalidParameter("csv: trailing characters in number: " + s);
        return v;
    } catch (const std::exception&) {
        throw InvalidParameter("csv: not a number: " + s);
    }
}

inline bool to_bool(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw InvalidParameter("csv: not a boolean: " + s);
}

} // namespace supbound::csv
