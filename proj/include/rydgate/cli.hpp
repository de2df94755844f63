#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rydgate {

// Command-line entry point. Exit codes: 0 success, 1 configuration or usage
// error, 2 numerical failure.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rydgate
