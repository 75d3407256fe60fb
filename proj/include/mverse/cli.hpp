#pragma once

// Batch front door. Subcommands: audit, eval, rank, ef, setcat, functors.
// Exit codes: 0 success, 1 verdict-level findings under --strict, 2 usage or
// input errors.

#include <iosfwd>
#include <string>
#include <vector>

namespace mverse {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mverse
