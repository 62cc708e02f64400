// SPDX-License-Identifier: Apache-2.0
//
// CSV tables with "# key: value" header lines. Numbers are written in the
// shortest form that parses back to the same double.
#pragma once

#include <array>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace twistlab {

using Value = std::variant<double, std::string>;

struct Table {
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  void add_row(std::vector<Value> row);  // throws DomainError on a width mismatch
  std::size_t column(const std::string& name) const;  // throws DomainError
  double number(std::size_t row, const std::string& name) const;
  const std::string* header_value(const std::string& key) const;

  bool operator==(const Table&) const = default;
};

/// Shortest round-trip decimal form.
std::string format_double(double x);

std::string write_csv(const Table& t);
/// Inverse of write_csv; fields that parse completely as numbers become doubles.
Table parse_csv(const std::string& text);

/// Whitespace-separated "x y z" blocks, one block per distinct x, blank line between.
std::string write_plot_data(const std::vector<std::array<double, 3>>& points);

/// Write via a temporary file and rename; throws std::runtime_error on failure.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace twistlab
