#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rlp {

/// Command-line entry point. args excludes the program name. Returns 0 on
/// success, 1 when planning fails and 2 on bad input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rlp
