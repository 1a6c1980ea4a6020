#pragma once

// Command dispatch: every subcommand reads a flat key=value configuration,
// runs the library, and renders one CSV or JSON document. Exit code 0 means
// every check the command ran passed; 1 means a check failed; validation,
// resource and numeric errors surface as exceptions the caller maps to the
// exit codes 2, 3 and 4.

#include <string>

#include "cli/config.hpp"

namespace isingrg::cli {

struct CommandOutcome {
    int exit_code = 0;
    std::string document;
    std::string output_path;  // "-" means stdout
};

CommandOutcome run_command(const RawConfig& raw);

// Exception-to-exit-code mapping shared by the binary and the tests.
int exit_code_for_current_exception();

}  // namespace isingrg::cli
