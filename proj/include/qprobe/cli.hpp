#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qprobe::cli {

/// Exit codes: 0 success, 1 I/O failure, 2 usage or parameter error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace qprobe::cli
