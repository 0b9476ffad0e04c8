#pragma once

#include <iosfwd>

namespace pnpk {

/// Entry point of the `pnpk` command line. Exit codes: 0 ok, 1 failed
/// validation, 2 invalid flags or input, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pnpk
