#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace derlab {

// Dispatches one CLI invocation.  Returns 0 on success or an all-pass suite,
// 1 on a failing suite or check, 2 on input errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace derlab
