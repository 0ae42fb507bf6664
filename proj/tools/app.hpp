#pragma once

#include <ostream>

namespace lacelab::app {

/// Command-line entry point. Returns the process exit code:
/// 0 ok, 1 verification failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lacelab::app
