#pragma once

// Command dispatch for the entroq tool. Reports go to `out` as JSON,
// diagnostics to `err`; the return value is the process exit code.

#include <iosfwd>
#include <string>
#include <vector>

namespace entroq {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int negative = 1;
inline constexpr int inconclusive = 2;
inline constexpr int usage = 64;
inline constexpr int data = 65;
}  // namespace exit_code

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entroq
