#include "cartelscreen/csv.hpp"

#include <fstream>
#include <sstream>

namespace cartelscreen {

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      table.rows.push_back(std::move(fields));
      table.line_numbers.push_back(line_no);
    }
  }
  if (table.header.empty()) throw SchemaError(path + ": missing header row");
  return table;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  auto emit = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << fields[i];
    }
    out << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace cartelscreen
