#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace theta::cli {

// Exit status: 0 success, 1 input error, 2 verification failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace theta::cli
