#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mtsuite::cli {

// Runs one CLI invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtsuite::cli
