#pragma once

#include <iosfwd>

namespace bneck {

enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitUsage = 2 };

/// Entry point of the command-line front end. Subcommands: mahler, diamond,
/// heart, identity, neck-energy, second-variation, signature-table, paneitz,
/// sweep, search, selftest.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace bneck
