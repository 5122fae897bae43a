#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dgtv::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kUsageError = 2 };

/// Entry point shared by the `dgtv` binary and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1-20", "1,2,5", "1-5,10" -> ascending list as written.
std::vector<std::size_t> parse_orders(const std::string& text);

std::vector<double> parse_grid(const std::string& text);

}  // namespace dgtv::cli
