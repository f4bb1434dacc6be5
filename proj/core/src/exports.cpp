#include "speigen/exports.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace speigen {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_table(const Table& table, const std::filesystem::path& file,
                 const std::string& format) {
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + file.string() + " for writing");

    if (format == "csv") {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out << ",";
            out << table.columns[c];
        }
        out << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out << ",";
                out << format_double(row[c]);
            }
            out << "\n";
        }
    } else if (format == "json") {
        out << "[\n";
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            out << "  {";
            for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
                if (c) out << ", ";
                out << "\"" << table.columns[c] << "\": " << format_double(table.rows[r][c]);
            }
            out << (r + 1 < table.rows.size() ? "},\n" : "}\n");
        }
        out << "]\n";
    } else {
        throw std::runtime_error("unknown export format: " + format);
    }
    if (!out) throw std::runtime_error("failed writing " + file.string());
}

}  // namespace speigen
