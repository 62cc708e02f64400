// SPDX-License-Identifier: Apache-2.0
//
// Flat key = value experiment configuration.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace twistlab {

class Config {
 public:
  Config();

  /// Known keys, in echo order.
  static const std::vector<std::string>& keys();
  static bool known(std::string_view key);

  /// Throws ConfigError for unknown keys or malformed values; `line` is
  /// reported with the error (0 = command line).
  void set(const std::string& key, const std::string& value, int line = 0);

  /// Parse "key = value" lines; '#' starts a comment.
  void load_text(const std::string& text);
  void load_file(const std::string& path);

  const std::string& raw(const std::string& key) const;
  int line_of(const std::string& key) const;

  double get_double(const std::string& key) const;
  long get_long(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;

  /// The eps list: `eps` if set, else log-spaced eps_min..eps_max (eps_count points).
  std::vector<double> eps_values() const;

  /// Output directory: `output_dir`, else $TWISTLAB_OUTPUT_DIR, else ".".
  std::string output_dir() const;

  /// All keys as "key: value" lines, sorted.
  std::vector<std::pair<std::string, std::string>> echo() const;
  /// FNV-1a over the numeric keys (threads and output_dir excluded), hex.
  std::string hash() const;

  /// Check ranges of every value; throws ConfigError naming the line.
  void validate() const;
  /// Format and range check of a single key.
  void validate_key(const std::string& key) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, Entry> values_;
};

/// Parse helpers shared with the CSV reader; throw ConfigError.
double parse_double(std::string_view s);
long parse_long(std::string_view s);

}  // namespace twistlab
