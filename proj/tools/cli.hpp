#pragma once

namespace latmove::cli {

// Full command-line surface; returns the process exit code
// (0 success, 1 validation error, 2 I/O error).
int run(int argc, const char* const* argv);

} // namespace latmove::cli
