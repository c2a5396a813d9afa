#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gnet {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Strict parse of a whole token; throws ConfigError naming `what`.
double parse_double(std::string_view token, std::string_view what = "number");

/// Splits on blanks and tabs.
std::vector<std::string_view> split_fields(std::string_view line);

/// True for blank lines and lines whose first non-blank char is '#'.
bool is_comment_or_blank(std::string_view line);

}  // namespace gnet
