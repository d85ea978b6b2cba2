#pragma once

#include <ostream>

namespace tgm::cli {

/// Entry point of the `tgm` tool. Returns 0 when the result is valid, 1 when
/// violations were found and 2 on usage, parse or I/O errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tgm::cli
