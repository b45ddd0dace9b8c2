#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace slat::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// slat validate|spectrum|hvz|thresholds|mourre|algebra-verify
///      [--out DIR] [--eps F] [--lambda F] [--delta F] CONFIG
/// Exit codes: 0 ok, 1 semantic or assertion failure, 2 usage, I/O or parse failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace slat::cli
