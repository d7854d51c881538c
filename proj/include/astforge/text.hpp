#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace astforge {

// Shortest round-trip decimal form, locale-independent (std::to_chars).
// All file output goes through this so that re-runs are byte-identical.
std::string format_double(double v);

// Parses a double accepting nothing but the number; empty/trailing junk fails.
bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, long long& out);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char sep);

}  // namespace astforge
