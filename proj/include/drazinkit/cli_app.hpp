#pragma once

#include <iosfwd>

namespace drazinkit::cli {

/// Entry point of the `drazinkit` command. Returns the process exit code:
/// 0 when every run converged, 2 when some run did not, 1 on usage, parse or
/// I/O errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace drazinkit::cli
