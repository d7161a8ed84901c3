#pragma once

namespace bern {

// Entry point for the `bern` command line tool.
// Exit codes: 0 success, 1 bad arguments, 2 computation or verification failure.
int run(int argc, const char* const* argv);

} // namespace bern
