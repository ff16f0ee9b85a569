#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace adrx {

// Window times with fixed 9 decimal places: "0.002000000".
inline std::string format_time(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", t);
    return buf;
}

// Values with 9 significant digits, trailing zeros kept: "3.25000000".
inline std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%#.9g", v);
    return buf;
}

struct SeriesColumn {
    std::string name;
    std::vector<double> values;
};

// One window-aligned table: every column shares the same uniform time grid.
struct CsvTable {
    double ts = 0.0;
    std::size_t windows = 0;
    std::vector<SeriesColumn> columns;
};

// Writes the table with UNIX newlines regardless of platform (binary mode).
// An optional abort marker is appended as a final comment row when an
// experiment dies midway, so partial files are recognizable.
inline void write_csv(const CsvTable& table, const std::string& path,
                      const std::string& abort_marker = {}) {
    for (const auto& col : table.columns)
        if (col.values.size() != table.windows)
            throw std::runtime_error("write_csv: column '" + col.name +
                                     "' length does not match window count");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("write_csv: cannot open for writing: " + path);

    out << "t_start,t_end";
    for (const auto& col : table.columns) out << ',' << col.name;
    out << '\n';

    for (std::size_t w = 0; w < table.windows; ++w) {
        out << format_time(static_cast<double>(w) * table.ts) << ','
            << format_time(static_cast<double>(w + 1) * table.ts);
        for (const auto& col : table.columns)
            out << ',' << format_value(col.values[w]);
        out << '\n';
    }
    if (!abort_marker.empty())
        out << "# aborted: " << abort_marker << '\n';

    out.flush();
    if (!out)
        throw std::runtime_error("write_csv: write failed: " + path);
}

// Sidecar path: output stem with a ".meta" suffix instead of the extension.
inline std::string meta_path_for(const std::string& csv_path) {
    const auto dot = csv_path.find_last_of('.');
    const auto slash = csv_path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return csv_path + ".meta";
    return csv_path.substr(0, dot) + ".meta";
}

// Records the fully resolved run: key = value lines.
inline void write_meta(const std::string& csv_path,
                       const std::vector<std::pair<std::string, std::string>>& entries) {
    const std::string path = meta_path_for(csv_path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("write_meta: cannot open for writing: " + path);
    for (const auto& [key, value] : entries)
        out << key << " = " << value << '\n';
    out.flush();
    if (!out)
        throw std::runtime_error("write_meta: write failed: " + path);
}

} // namespace adrx
