#pragma once

#include <string>
#include <vector>

#include "bcdbench/harness.hpp"

namespace bcd {

struct CliInvocation {
  ExperimentConfig config;
  std::string out_path;
  bool verify_bounds = false;
};

struct HelpRequested {
  std::string text;
};

// Parses and validates flags; throws std::invalid_argument naming the
// offending flag, or HelpRequested for --help.
CliInvocation parse_args(const std::vector<std::string>& args);

// Comment lines echoed into the output CSV (also what makes the golden-file
// test reproducible through the library path).
std::vector<std::string> config_comment_lines(const CliInvocation& invocation);

// Full run: config -> harness -> CSV. Returns the process exit code.
int cli_main(int argc, const char* const* argv);

}  // namespace bcd
