// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <map>
#include <sstream>
#include <string>

#include "config.hpp"
#include "csv.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "run.hpp"

using namespace twistlab;
namespace fs = std::filesystem;

namespace {

struct Fixture {
  fs::path dir;
  Fixture() : dir(fs::temp_directory_path() / "twistlab_test_run") {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Fixture() { fs::remove_all(dir); }

  Config config(const std::map<std::string, std::string>& kv) const {
    Config c;
    c.set("output_dir", dir.string());
    for (const auto& [k, v] : kv) c.set(k, v);
    return c;
  }

  std::string run(const std::string& sub, const Config& c) const {
    std::ostringstream out;
    twistlab::run(sub, c, out);
    return out.str();
  }

  void verify(const fs::path& file) const {
    Config c;
    c.set("file", file.string());
    CHECK(run("verify", c).rfind("verified ", 0) == 0);
  }
};

std::string body(const std::string& csv) {
  std::string out, line;
  std::istringstream in(csv);
  while (std::getline(in, line))
    if (line.empty() || line[0] != '#') out += line + "\n";
  return out;
}

}  // namespace

TEST_CASE("every subcommand writes verifiable tables") {
  const Fixture f;
  const std::map<std::string, std::map<std::string, std::string>> small = {
      {"random-exact", {{"eps", "0.3,3"}}},
      {"random-mc", {{"eps", "0.3"}, {"N", "100"}, {"M", "40"}}},
      {"lambda-scan", {{"eps", "2"}, {"Ng", "4"}, {"Np", "4"}, {"M", "128"}, {"transient", "16"}}},
      {"diffused", {{"eps", "0.3"}, {"delta", "0.3"}, {"N", "100"}, {"Mr", "8"}, {"Mp", "2"}}},
      {"fixed-points", {{"eps", "0.1"}, {"beta", "1.2"}, {"theta", "6"}}},
      {"bifurcation-map", {{"eps", "0.5"}, {"n_theta", "8"}, {"n_beta", "4"}}},
      {"double-zero-curves", {{"samples", "50"}}},
      {"megno-demo", {{"eps", "1"}, {"N", "256"}}},
      {"linear-check", {{"n_alpha", "16"}, {"n_z", "64"}, {"N", "200"}, {"M", "20"}, {"n_phi", "1024"}}},
  };
  for (const auto& [sub, kv] : small) {
    CAPTURE(sub);
    const std::string out = f.run(sub, f.config(kv));
    CHECK_FALSE(out.empty());
  }
  int tables = 0;
  for (const auto& e : fs::directory_iterator(f.dir)) {
    if (e.path().extension() != ".csv") continue;
    CAPTURE(e.path().string());
    f.verify(e.path());
    ++tables;
  }
  CHECK(tables >= 11);
  CHECK(fs::exists(f.dir / "lambda_scan_eps2.dat"));
  CHECK(fs::exists(f.dir / "bifurcation_eps0.5.dat"));
}

TEST_CASE("random-exact summary line") {
  const Fixture f;
  const std::string out = f.run("random-exact", f.config({{"eps", "0.3,0"}}));
  CHECK(out.find("R=0.0547518") != std::string::npos);
  CHECK(out.find("eps=0 R=0 ") != std::string::npos);
  const Table t = parse_csv(read_file((f.dir / "random_exact.csv").string()));
  CHECK(t.rows.size() == 2);
  CHECK(*t.header_value("eps") == "0.3,0");
  CHECK(*t.header_value("table") == "random_exact");
}

TEST_CASE("verify rejects tampered tables") {
  const Fixture f;
  f.run("lambda-scan", f.config({{"eps", "1"}, {"Ng", "2"}, {"Np", "2"}, {"M", "64"}, {"transient", "8"}}));
  const fs::path p = f.dir / "lambda_scan_eps1.csv";
  Table t = parse_csv(read_file(p.string()));
  t.rows[3][t.column("lambda_g")] = t.number(3, "lambda_g") + 0.5;
  write_file_atomic(p.string(), write_csv(t));
  Config c;
  c.set("file", p.string());
  CHECK_THROWS_AS(f.run("verify", c), NumericError);

  f.run("random-exact", f.config({{"eps", "0.3"}}));
  const fs::path q = f.dir / "random_exact.csv";
  std::string text = read_file(q.string());
  text.replace(text.find("# seed: 1"), 9, "# seed: 2");
  write_file_atomic(q.string(), text);
  c.set("file", q.string());
  CHECK_THROWS_AS(f.run("verify", c), NumericError);
  c.set("file", (f.dir / "absent.csv").string());
  CHECK_THROWS_AS(f.run("verify", c), ConfigError);
  CHECK_THROWS_AS(f.run("verify", Config()), ConfigError);
}

TEST_CASE("configuration errors") {
  const Fixture f;
  CHECK_THROWS_AS(f.run("no-such-command", f.config({})), ConfigError);
  CHECK_THROWS_AS(f.run("bifurcation-map", f.config({{"theta_min", "3"}, {"theta_max", "2"}})), ConfigError);
  CHECK_THROWS_AS(f.run("linear-check", f.config({{"matrix", "1,0,0,-1"}})), ConfigError);
}

TEST_CASE("thread count does not change the numbers") {
  const Fixture f;
  const std::map<std::string, std::map<std::string, std::string>> cases = {
      {"random-mc", {{"eps", "0.3,3"}, {"N", "200"}, {"M", "50"}}},
      {"lambda-scan", {{"eps", "3"}, {"Ng", "4"}, {"Np", "4"}, {"M", "128"}, {"transient", "16"}}},
      {"diffused", {{"eps", "1"}, {"delta", "0.5"}, {"N", "100"}, {"Mr", "10"}, {"Mp", "2"}}},
  };
  for (const auto& [sub, kv] : cases) {
    CAPTURE(sub);
    std::map<std::string, std::string> bodies;
    for (const char* threads : {"1", "4"}) {
      auto k = kv;
      k["threads"] = threads;
      f.run(sub, f.config(k));
      for (const auto& e : fs::directory_iterator(f.dir)) bodies[e.path().filename().string() + threads] = body(read_file(e.path().string()));
      fs::remove_all(f.dir);
      fs::create_directories(f.dir);
    }
    for (const auto& [name, text] : bodies) {
      if (name.back() != '1') continue;
      const std::string other = name.substr(0, name.size() - 1) + "4";
      REQUIRE(bodies.count(other) == 1);
      CHECK(bodies[other] == text);
    }
  }
}
