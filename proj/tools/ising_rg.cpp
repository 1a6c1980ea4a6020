#include <exception>
#include <fstream>
#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace isingrg::cli;
    try {
        const RawConfig raw = parse_cli(argc, argv);
        const CommandOutcome out = run_command(raw);
        if (out.output_path == "-") {
            std::cout << out.document;
        } else {
            std::ofstream file(out.output_path, std::ios::binary);
            if (!file) {
                std::cerr << "error: cannot write '" << out.output_path << "'\n";
                return 2;
            }
            file << out.document;
        }
        return out.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for_current_exception();
    }
}
