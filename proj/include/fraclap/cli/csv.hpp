#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fraclap::cli {

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// Inverse of format_double; accepts "inf", "-inf" and "nan". Throws std::invalid_argument.
double parse_double(std::string_view text);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    /// Index of a header column; throws std::out_of_range.
    std::size_t column(std::string_view name) const;
};

std::string to_csv(const CsvTable& table);
/// Plain comma-separated text without quoting; the first line is the header.
CsvTable parse_csv(std::string_view text);

/// Writes to a temporary file next to `path` and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace fraclap::cli
