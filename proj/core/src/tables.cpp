#include "cdlab/tables.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cdlab/errors.hpp"

namespace cdlab {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Table::to_csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw InvalidInputError("Table::to_csv: ragged row in table " + name);
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_g17(row[i]);
    os << "\n";
  }
  return os.str();
}

Table Table::from_csv(const std::string& name, const std::string& text) {
  Table t;
  t.name = name;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw IoError("Table::from_csv: empty input");
  std::stringstream header(line);
  std::string col;
  while (std::getline(header, col, ',')) t.columns.push_back(col);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != t.columns.size()) throw IoError("Table::from_csv: ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write file: " + path);
  f << content;
  if (!f) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace cdlab
