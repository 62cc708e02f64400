// SPDX-License-Identifier: Apache-2.0
#include "csv.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"

namespace twistlab {

void Table::add_row(std::vector<Value> row) {
  if (row.size() != columns.size())
    throw DomainError("table row has " + std::to_string(row.size()) + " fields, expected " +
                      std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw DomainError("no column '" + name + "'");
}

double Table::number(std::size_t row, const std::string& name) const {
  const Value& v = rows.at(row).at(column(name));
  if (const double* d = std::get_if<double>(&v)) return *d;
  throw DomainError("column '" + name + "' is not numeric");
}

const std::string* Table::header_value(const std::string& key) const {
  for (const auto& [k, v] : header)
    if (k == key) return &v;
  return nullptr;
}

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string write_csv(const Table& t) {
  std::string out;
  for (const auto& [k, v] : t.header) out += "# " + k + ": " + v + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const double* d = std::get_if<double>(&row[i])) {
        out += format_double(*d);
      } else {
        const std::string& s = std::get<std::string>(row[i]);
        if (s.find_first_of(",\n") != std::string::npos) throw DomainError("CSV text field contains a separator");
        out += s;
      }
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      f.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  f.push_back(cur);
  return f;
}

Value parse_field(const std::string& s) {
  double d = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), d);
  if (!s.empty() && r.ec == std::errc() && r.ptr == s.data() + s.size()) return d;
  return s;
}

}  // namespace

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool have_columns = false;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# ", 0) == 0) {
      if (have_columns) throw ConfigError("header line after the column row", n);
      const auto colon = line.find(": ", 2);
      if (colon == std::string::npos) {
        // "# key:" with an empty value and no trailing space
        if (line.back() == ':') {
          t.header.emplace_back(line.substr(2, line.size() - 3), "");
          continue;
        }
        throw ConfigError("malformed header line", n);
      }
      t.header.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    if (line.empty()) continue;
    if (!have_columns) {
      t.columns = split_fields(line);
      have_columns = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != t.columns.size())
      throw ConfigError("row has " + std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(t.columns.size()),
                        n);
    std::vector<Value> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_field(f));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string write_plot_data(const std::vector<std::array<double, 3>>& points) {
  std::string out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0 && points[i][0] != points[i - 1][0]) out += '\n';
    out += format_double(points[i][0]) + ' ' + format_double(points[i][1]) + ' ' + format_double(points[i][2]) + '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto '" + path + "': " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace twistlab
