#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace logictree::cli {

/// Runs the command line `args` (program name excluded). Returns the process
/// exit status: 0 on success, 1 when any record failed fatally, 2 on usage or
/// input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace logictree::cli
