#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Command-line surface: bench, fit, estimate, compare, crossover, classify,
// convert, plot-data. Exit codes: 0 success, 2 usage or validation failure,
// 3 internal correctness failure.

namespace rcx::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rcx::cli
