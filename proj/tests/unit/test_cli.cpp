// SPDX-License-Identifier: Apache-2.0
//
// Runs the installed command-line tool as a subprocess.
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result sh(const std::string& args) {
  const std::string cmd = std::string(TWISTLAB_CLI) + " " + args + " 2>&1";
  Result r{-1, {}};
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path fresh(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("twistlab_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("random-exact output") {
  const fs::path d = fresh("exact");
  Result r = sh("random-exact --eps 0.3 --output_dir " + d.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("R=0.0547518") != std::string::npos);
  r = sh("random-exact --eps 0 --output_dir " + d.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("R=0 ") != std::string::npos);
  r = sh("verify --file " + (d / "random_exact.csv").string());
  CHECK(r.code == 0);
  fs::remove_all(d);
}

TEST_CASE("exit codes") {
  const fs::path d = fresh("codes");
  Result r = sh("random-exact --eps -1 --output_dir " + d.string());
  CHECK(r.code == 2);
  CHECK(r.out.find("error:") != std::string::npos);
  r = sh("random-exact --no-such-flag 1");
  CHECK(r.code == 2);
  r = sh("");
  CHECK(r.code == 2);

  std::ofstream(d / "bad.cfg") << "eps = 0.3\nbogus = 1\n";
  r = sh("random-exact --config " + (d / "bad.cfg").string());
  CHECK(r.code == 2);
  CHECK(r.out.find("line 2") != std::string::npos);

  std::ofstream(d / "table.csv") << "# table: x\n# config_hash: 0\n# rows: 1\na\n1\n";
  r = sh("verify --file " + (d / "table.csv").string());
  CHECK(r.code == 3);
  fs::remove_all(d);
}

TEST_CASE("config file and flag precedence") {
  const fs::path d = fresh("cfg");
  std::ofstream(d / "run.cfg") << "# two values\neps = 0.1, 3\noutput_dir = " << d.string() << "\n";
  Result r = sh("random-exact --config " + (d / "run.cfg").string());
  CHECK(r.code == 0);
  CHECK(r.out.find("eps=0.1 ") != std::string::npos);
  CHECK(r.out.find("eps=3 ") != std::string::npos);
  r = sh("random-exact --config " + (d / "run.cfg").string() + " --eps 0.3");
  CHECK(r.out.find("eps=0.1 ") == std::string::npos);
  CHECK(r.out.find("eps=0.3 ") != std::string::npos);
  fs::remove_all(d);
}

TEST_CASE("output directory from the environment") {
  const fs::path d = fresh("env");
  const std::string cmd = "TWISTLAB_OUTPUT_DIR=" + d.string() + " " + std::string(TWISTLAB_CLI) +
                          " double-zero-curves --samples 20 > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(d / "double_zero_curves.csv"));
  fs::remove_all(d);
}
