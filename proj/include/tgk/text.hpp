#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small text and file helpers shared by the line-based formats.

namespace tgk {

std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char sep);
/// Whitespace-separated tokens.
std::vector<std::string_view> tokenize(std::string_view line);
/// Drops everything from the first '#'.
std::string_view strip_comment(std::string_view line);
std::string_view trim(std::string_view s);

std::string read_file(const std::string& path);
/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

/// Decimal text with 17 significant digits, enough to round-trip a double.
std::string format_double(double x);

}  // namespace tgk
