#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rrqa::text {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool icontains(std::string_view haystack, std::string_view needle);
bool istarts_with(std::string_view s, std::string_view prefix);
std::vector<std::string_view> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Strips a leading "Label:" (case-insensitive) if present, then trims.
std::string strip_label(std::string_view s, std::string_view label);

/// Reads a whole file. Throws FileNotFound.
std::string read_file(const std::string& path);

/// Writes atomically via a sibling temp file and rename.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace rrqa::text
