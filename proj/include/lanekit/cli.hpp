#pragma once

#include <string>
#include <vector>

namespace lanekit {

// Entry point behind the command-line binary, callable in-process from tests.
// Subcommands: encode, decode, loss, eval, synth, bench.
// Returns 0 on success, 2 on usage errors, 1 on any other failure (the
// diagnostic goes to stderr and names the offending file where applicable).
int run_cli(const std::vector<std::string>& args);

}  // namespace lanekit
