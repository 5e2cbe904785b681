#pragma once

#include <iosfwd>

namespace ucp::cli {

// Exit codes: 0 success, 1 user or data error, 2 internal error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUser = 1;
inline constexpr int kExitInternal = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ucp::cli
