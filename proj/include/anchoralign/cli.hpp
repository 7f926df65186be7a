#pragma once

#include <iosfwd>

namespace anchoralign {

/// Entry point of the command-line tool. Subcommands: generate, align, sweep,
/// bounds, region, timing. Returns 0 on success, 2 on usage errors and 1 on
/// runtime errors.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace anchoralign
