// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "exponents.hpp"

namespace twistlab {

namespace {

struct KeyDefault {
  const char* key;
  const char* value;
};

// clang-format off
constexpr KeyDefault kDefaults[] = {
    {"eps", "0.3"},        {"eps_min", "0.1"},    {"eps_max", "10"},     {"eps_count", "0"},
    {"N", "1000"},         {"M", "1000"},         {"Np", "128"},         {"Ng", "64"},
    {"Mr", "100"},         {"Mp", "10"},          {"delta", "6.283185307179586"},
    {"seed", "1"},         {"threads", "0"},      {"output_dir", ""},
    {"estimator", "megno_improved"},              {"transient", "512"},
    {"beta", "0.3"},       {"theta", "2"},
    {"n_theta", "64"},     {"n_beta", "64"},
    {"theta_min", "0"},    {"theta_max", "6.283185307179586"},
    {"beta_min", "0"},     {"beta_max", "1.5707963267948966"},
    {"samples", "200"},    {"matrix", "2,0,0,0.5"},
    {"n_alpha", "256"},    {"n_z", "512"},        {"n_phi", "16384"},    {"g_angle", "0"},
    {"plot", "1"},         {"file", ""},
};
// clang-format on

constexpr const char* kExecutionOnly[] = {"threads", "output_dir", "file"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

double parse_double(std::string_view s) {
  double v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("not a number: '" + std::string(s) + "'");
  return v;
}

long parse_long(std::string_view s) {
  long v = 0;
  const auto* end = s.data() + s.size();
  auto r = std::from_chars(s.data(), end, v);
  if (r.ec == std::errc() && r.ptr == end) return v;
  // accept integral values written as 1e6
  double d = 0;
  const auto rd = std::from_chars(s.data(), end, d);
  if (rd.ec == std::errc() && rd.ptr == end && std::floor(d) == d && std::abs(d) < 9e18) return static_cast<long>(d);
  throw ConfigError("not an integer: '" + std::string(s) + "'");
}

Config::Config() {
  for (const auto& kd : kDefaults) values_[kd.key] = {kd.value, 0};
}

const std::vector<std::string>& Config::keys() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> v;
    for (const auto& kd : kDefaults) v.emplace_back(kd.key);
    return v;
  }();
  return k;
}

bool Config::known(std::string_view key) {
  return std::any_of(std::begin(kDefaults), std::end(kDefaults), [&](const KeyDefault& kd) { return key == kd.key; });
}

void Config::set(const std::string& key, const std::string& value, int line) {
  if (!known(key)) throw ConfigError("unknown key '" + key + "'", line);
  Entry previous = values_[key];
  values_[key] = {value, line};
  try {
    validate_key(key);
  } catch (...) {
    values_[key] = previous;
    throw;
  }
}

void Config::load_text(const std::string& text) {
  std::istringstream in(text);
  std::string raw_line;
  int line = 0;
  while (std::getline(in, raw_line)) {
    ++line;
    const auto hash = raw_line.find('#');
    const std::string body = trim(std::string_view(raw_line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key", line);
    set(key, value, line);
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  load_text(ss.str());
}

const std::string& Config::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown key '" + key + "'");
  return it->second.value;
}

int Config::line_of(const std::string& key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? 0 : it->second.line;
}

double Config::get_double(const std::string& key) const {
  try {
    return parse_double(raw(key));
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what(), line_of(key));
  }
}

long Config::get_long(const std::string& key) const {
  try {
    return parse_long(raw(key));
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what(), line_of(key));
  }
}

std::uint64_t Config::get_u64(const std::string& key) const {
  const std::string& s = raw(key);
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ConfigError(key + ": not an unsigned 64-bit integer: '" + s + "'", line_of(key));
  return v;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& t : split_list(raw(key))) {
    try {
      out.push_back(parse_double(t));
    } catch (const ConfigError& e) {
      throw ConfigError(key + ": " + e.what(), line_of(key));
    }
  }
  return out;
}

std::vector<double> Config::eps_values() const {
  const long n = get_long("eps_count");
  if (n <= 0) return get_doubles("eps");
  const double lo = get_double("eps_min"), hi = get_double("eps_max");
  std::vector<double> out;
  for (long i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out.push_back(lo * std::pow(hi / lo, t));
  }
  return out;
}

std::string Config::output_dir() const {
  const std::string& d = raw("output_dir");
  if (!d.empty()) return d;
  if (const char* env = std::getenv("TWISTLAB_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

std::vector<std::pair<std::string, std::string>> Config::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, e] : values_) out.emplace_back(k, e.value);
  return out;
}

std::string Config::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [k, e] : values_) {
    if (std::any_of(std::begin(kExecutionOnly), std::end(kExecutionOnly), [&](const char* x) { return k == x; }))
      continue;
    feed(k);
    feed("=");
    feed(e.value);
    feed("\n");
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void Config::validate_key(const std::string& key) const {
  const int line = line_of(key);
  auto fail = [&](const std::string& msg) { throw ConfigError(msg, line); };
  static const char* const kCounts[] = {"N", "M", "Np", "Mr", "Mp", "n_theta", "n_beta",
                                        "samples", "n_alpha", "n_z", "n_phi"};
  if (std::any_of(std::begin(kCounts), std::end(kCounts), [&](const char* k) { return key == k; })) {
    if (get_long(key) < 1) fail(key + " must be >= 1");
  } else if (key == "Ng") {
    const long ng = get_long(key);
    if (ng < 2 || ng % 2 != 0) fail("Ng must be a positive even number of Simpson intervals");
  } else if (key == "transient" || key == "threads" || key == "eps_count" || key == "plot") {
    if (get_long(key) < 0) fail(key + " must be >= 0");
  } else if (key == "delta") {
    if (!(get_double(key) > 0.0)) fail("delta must be > 0");
  } else if (key == "seed") {
    get_u64(key);
  } else if (key == "eps") {
    for (double e : get_doubles(key))
      if (!(e >= 0.0)) fail("eps values must be >= 0");
  } else if (key == "eps_min" || key == "eps_max") {
    if (!(get_double(key) > 0.0)) fail(key + " must be > 0");
  } else if (key == "matrix") {
    if (get_doubles(key).size() != 4) fail("matrix must list four entries a,b,c,d");
  } else if (key == "estimator") {
    try {
      estimator_from_string(raw(key));
    } catch (const ConfigError& e) {
      fail(e.what());
    }
  } else if (key == "output_dir" || key == "file") {
    // free text
  } else {
    get_double(key);
  }
}

void Config::validate() const {
  for (const auto& k : keys()) validate_key(k);
  if (!(get_double("theta_max") > get_double("theta_min")))
    throw ConfigError("theta_max must exceed theta_min", line_of("theta_max"));
  if (!(get_double("beta_max") > get_double("beta_min")))
    throw ConfigError("beta_max must exceed beta_min", line_of("beta_max"));
  if (get_long("eps_count") == 0 && get_doubles("eps").empty())
    throw ConfigError("eps list is empty", line_of("eps"));
}

}  // namespace twistlab
