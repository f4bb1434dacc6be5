#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace speigen {

/// One export table; rendered as CSV or JSON with fixed column order and
/// fixed number formatting, so identical data gives identical bytes.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string format_double(double v);  // %.17g, round-trip exact

void write_table(const Table& table, const std::filesystem::path& file,
                 const std::string& format);

}  // namespace speigen
