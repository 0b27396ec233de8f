#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace catalloc::cli {

// args excludes the program name. Returns the process exit status:
// 0 success, 1 invalid input or usage, 2 capacity/budget refusal.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "2..11", "3" or "2,4,6"
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

}  // namespace catalloc::cli
