#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rppg {

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

// Throws CorruptHeader when the cell is not a number.
double parse_double(const std::string& s);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;          // -1 when absent
  int require_column(const std::string& name) const;  // throws UnknownColumn
};

CsvTable read_csv(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace rppg
