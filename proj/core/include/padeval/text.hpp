#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

// Small text and file helpers shared by the CSV/JSON readers and writers.
namespace padeval::text {

std::vector<std::string_view> split(std::string_view line, char sep);

/// Splits on '\n', dropping a trailing '\r' from each line. A final empty
/// line (file ending in a newline) is not returned.
std::vector<std::string_view> lines(std::string_view text);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Strict parse of a whole field as a double; returns false on garbage.
bool parse_double(std::string_view s, double& out);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace padeval::text
