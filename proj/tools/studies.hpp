#pragma once

#include <string>

#include "config.hpp"

namespace cli {

// Runs the named study; writes CSV/SVG artifacts and manifest.json into
// out_dir. Returns true when every property check passed.
bool run_study(const std::string& study, Config& cfg, const std::string& out_dir);

// Built-in property suite (`--check`): prints one PASS/FAIL line per property,
// returns the number of failures.
int run_builtin_checks();

}  // namespace cli
