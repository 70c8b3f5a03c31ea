#pragma once

#include <iosfwd>

namespace fforge {

// Exit codes: 0 ok, 1 usage, 2 configuration, 3 numerical failure. Errors
// are written to err as a single JSON object.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fforge
