// SPDX-FileCopyrightText: 2026 the priorgsa authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "priorgsa/common.hpp"

namespace priorgsa {

// Shortest round-trip decimal form of a double (17 significant digits).
std::string format_double(double x);

// Tabular output: '#' metadata lines, one header row, numeric rows.
// Rerunning with identical content yields byte-identical files.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_metadata(const std::string& key, const std::string& value);
  void add_row(const std::vector<double>& row);
  // Pre-formatted cells for tables mixing labels with numbers.
  void add_row(std::vector<std::string> row);
  std::string to_string() const;
  void write(const std::string& path) const;

  int rows() const { return static_cast<int>(rows_.size()); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> metadata_;
  std::vector<std::vector<std::string>> rows_;
};

// Numeric CSV reader; '#' lines are skipped, a non-numeric first row is
// treated as the header.
struct CsvData {
  std::vector<std::string> columns;
  Matrix values;
};
CsvData read_csv(const std::string& path);

void ensure_directory(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace priorgsa
