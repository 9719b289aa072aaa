#ifndef ARCHSHEAF_TESTS_RUN_CLI_HPP
#define ARCHSHEAF_TESTS_RUN_CLI_HPP

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <sys/wait.h>

namespace testutil {

struct CliResult {
    int exit_code = -1;
    std::string output;

    bool contains(const std::string& needle) const {
        return output.find(needle) != std::string::npos;
    }
};

// Runs a shell command, capturing stdout (and stderr when merge is set).
inline CliResult run_command(const std::string& command, bool merge_stderr = true) {
    std::string full = command + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + full);
    CliResult result;
    std::array<char, 4096> buffer;
    std::size_t n;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.output.append(buffer.data(), n);
    }
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

inline CliResult run_cli(const std::string& args, bool merge_stderr = true) {
    return run_command(std::string(ARCHSHEAF_CLI_PATH) + " " + args, merge_stderr);
}

}  // namespace testutil

#endif
