#pragma once

#include <ostream>

namespace coker::cli {

/// Exit codes: 0 success, 1 assertion failure, 2 usage or configuration error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace coker::cli
