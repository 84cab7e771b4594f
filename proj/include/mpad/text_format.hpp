#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mpad {

/// Shortest decimal rendering that parses back to the same double.
std::string format_real(double value);

/// Parses a complete token as a double. Leading/trailing blanks are ignored;
/// anything else left over makes the parse fail.
std::optional<double> parse_real(std::string_view token);

std::string_view trim(std::string_view text);

/// Splits on `sep` without any quoting rules. Always returns at least one field.
std::vector<std::string_view> split(std::string_view text, char sep);

/// Reads a text file into lines, stripping a trailing '\r' from each.
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Writes `content` to `path`, replacing it. Throws IoError.
void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace mpad
