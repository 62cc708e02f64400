// SPDX-License-Identifier: Apache-2.0
//
// twistlab command-line driver. Every subcommand accepts --config FILE and
// --<key> VALUE for each configuration key; flags override the file.
#include <cstdio>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twistlab/twistlab.h"

namespace {

std::vector<std::string> words(const char* s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

int exit_code(twl_status s) {
  switch (s) {
    case TWL_OK: return 0;
    case TWL_ERR_CONFIG:
    case TWL_ERR_DOMAIN:
    case TWL_ERR_INVALID_ARGUMENT: return 2;
    case TWL_ERR_NUMERIC: return 3;
    default: return 1;
  }
}

struct ContextDeleter {
  void operator()(twl_context* c) const { twl_context_destroy(c); }
};

const std::map<std::string, std::string> kAbout = {
    {"random-exact", "R(eps) by quadrature, with both series"},
    {"random-mc", "Monte Carlo estimate of R(eps)"},
    {"lambda-scan", "average exponent over a grid of rotations"},
    {"diffused", "exponent with rotations drawn from a ball of radius delta"},
    {"fixed-points", "fixed points of g o f_eps for one (beta, theta)"},
    {"bifurcation-map", "fixed-point counts and types over a (theta, beta) grid"},
    {"double-zero-curves", "curves where fixed points collide, small eps"},
    {"megno-demo", "MEGNO and classical estimates along sample orbits"},
    {"linear-check", "linear cocycle: Avila-Bochi, coset exponent, circle operator"},
    {"verify", "check the header, hash and row consistency of one CSV (--file)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twistlab: random and average Lyapunov exponents of twist maps on the sphere"};
  app.set_version_flag("--version", std::string(twl_version()));
  app.require_subcommand(1);

  const auto keys = words(twl_config_keys());
  std::string config_file;
  std::map<std::string, std::string> flags;
  for (const auto& name : words(twl_subcommands())) {
    const auto about = kAbout.find(name);
    CLI::App* sub = app.add_subcommand(name, about == kAbout.end() ? "" : about->second);
    sub->add_option("--config", config_file, "flat key = value file");
    for (const auto& k : keys) sub->add_option("--" + k, flags[k]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  twl_context* raw = nullptr;
  if (twl_context_create(&raw) != TWL_OK) {
    std::fprintf(stderr, "error: %s\n", twl_error_message());
    return 1;
  }
  std::unique_ptr<twl_context, ContextDeleter> ctx(raw);

  if (!config_file.empty()) {
    if (const twl_status s = twl_config_load_file(ctx.get(), config_file.c_str()); s != TWL_OK) {
      std::fprintf(stderr, "error: %s: %s\n", config_file.c_str(), twl_last_error(ctx.get()));
      return exit_code(s);
    }
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();
  for (const auto& k : keys) {
    if (app.get_subcommand(subcommand)->count("--" + k) == 0) continue;
    if (const twl_status s = twl_config_set(ctx.get(), k.c_str(), flags[k].c_str()); s != TWL_OK) {
      std::fprintf(stderr, "error: --%s: %s\n", k.c_str(), twl_last_error(ctx.get()));
      return exit_code(s);
    }
  }

  const twl_status s = twl_run(ctx.get(), subcommand.c_str());
  std::fputs(twl_summary(ctx.get()), stdout);
  if (s != TWL_OK) {
    std::fprintf(stderr, "error: %s\n", twl_last_error(ctx.get()));
    return exit_code(s);
  }
  return 0;
}
