#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdg::cli {

// Exit codes: 0 success/Yes, 1 No/infeasible, 2 usage or input error,
// 3 internal error.  One JSON document on `out`; errors as JSON on `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace sdg::cli
