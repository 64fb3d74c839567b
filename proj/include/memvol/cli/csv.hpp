#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace memvol::cli {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);
double parse_double(const std::string& cell);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

/// Comma separated, LF line endings, no quoting (cells never contain commas).
std::string to_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

/// Throws IoError naming the path on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace memvol::cli
