#pragma once

// Small text helpers shared by the file-format readers.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace netpen::text {

std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char sep);
std::vector<std::string_view> split_whitespace(std::string_view text);
std::string_view trim(std::string_view s);
std::string_view strip_comment(std::string_view line, char marker = '#');
std::string to_lower(std::string_view s);

/// Strict full-string double parse; throws SchemaError(location, ...) on failure.
double parse_double(std::string_view s, const std::string& location);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace netpen::text
