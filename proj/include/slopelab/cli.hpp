#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "slopelab/io.hpp"

namespace slopelab::cli {

enum ExitCode : int { ok = 0, validation_failure = 1, numeric_failure = 2, config_error = 3 };

/// Runs one command line (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Radians from a number or a string such as "0.25pi", "pi" or "0.7".
double parse_angle(const Json& v);

/// Sets a dotted key from "a.b.c=value". The value is read as JSON when it
/// parses, otherwise kept as a string.
void apply_override(Json& cfg, const std::string& assignment);

/// The schedule described by cfg["schedule"] with cfg["angle"]. Throws ConfigError.
Schedule build_schedule(const Json& cfg);

}  // namespace slopelab::cli
