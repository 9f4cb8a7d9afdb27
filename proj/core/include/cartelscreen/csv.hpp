#pragma once

#include <string>
#include <vector>

#include "cartelscreen/errors.hpp"

namespace cartelscreen {

// Minimal CSV support for the fixed schemas this project reads and writes:
// comma-separated, no quoting (field values never contain commas), one
// header row. Line numbers are 1-based and include the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // source line of each row

  // Index of a header column; -1 when absent.
  int column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace cartelscreen
