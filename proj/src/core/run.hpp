// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace twistlab {

const std::vector<std::string>& subcommands();

/// Run a subcommand: write its CSV files under cfg.output_dir() and one summary
/// line per result to `out`. Throws ConfigError, DomainError or NumericError.
void run(const std::string& subcommand, const Config& cfg, std::ostream& out);

}  // namespace twistlab
