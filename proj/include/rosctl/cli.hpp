#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rosctl::cli {

// Exit codes: 0 success, 1 failed verification or internal error, 2 configuration error,
// 3 solver non-convergence.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// Arguments without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rosctl::cli
