#pragma once

#include <iosfwd>

namespace gap {

/// Entry point of the gapbench tool. Subcommands: gen, run, rates, spectrum,
/// plot. Returns 0 on success, 2 on usage errors, 1 on runtime failures.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gap
