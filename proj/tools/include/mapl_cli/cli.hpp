#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mapl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;      // bad flags, unreadable or invalid input
inline constexpr int kExitNumerical = 2;  // a solver or quadrature did not converge

/// Runs the `mapl` command line. `args` excludes the program name. Results go
/// to `out`; diagnostics go to `err`, as a single JSON object per failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Path of the manifest written next to an output file.
std::string manifest_path(const std::string& output_path);

}  // namespace mapl::cli
