#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace s2gd {

/// Entry point of the command-line harness. `args` excludes the program
/// name. Subcommands: plan | gen | run | compare | solve-ref.
/// Returns a process exit code; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace s2gd
