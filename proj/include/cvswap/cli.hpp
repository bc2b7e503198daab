#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace cvswap::cli {

/// Process exit codes of the cvswap tool.
enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kConfigError = 2,    // unreadable or malformed config, unknown key, bad value type
    kPhysicsError = 3,   // parameters outside their physical domain
    kVerifyFailed = 4,   // oracle and closed form disagree
    kIoError = 5,        // output path not writable
    kUsage = 64,         // bad command line
};

/// Runs the tool with argv-style arguments (args[0] is the program name).
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cvswap::cli
