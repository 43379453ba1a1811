#pragma once

#include <ostream>

namespace cimmino {

/// Exit codes: 0 ok, 1 runtime failure, 2 validation, 3 pole, 4 check or
/// tolerance failure, 5 singular matrix.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cimmino
