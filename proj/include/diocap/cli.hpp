#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace diocap::cli {

// Exit codes: 0 success, 2 usage error, 3 domain or precision failure,
// 4 optimizer non-convergence, 1 anything unexpected.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace diocap::cli
