#pragma once

#include <string>
#include <vector>

namespace cdlab {

// Numeric results table; written as comma-separated text at 17 significant
// digits so reruns are byte-comparable.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::initializer_list<double> values) { rows.emplace_back(values); }
  std::string to_csv() const;
  static Table from_csv(const std::string& name, const std::string& text);
};

std::string format_g17(double v);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace cdlab
