#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bbcirl {

// Shortest decimal form that round-trips the exact double (std::to_chars).
std::string format_double(double v);
double parse_double(std::string_view text);
long long parse_int(std::string_view text);
std::uint64_t parse_u64(std::string_view text);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// Writes via a temp file in the same directory, then renames into place.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);
std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view s);

// Grid CSV: row-major values laid out as `height` CSV rows of `width` cells.
std::string grid_csv(std::span<const double> values, int width, int height,
                     const std::vector<std::string>& manifest);

// Portable graymap (P2), one gray level per cell, 0 maps to black.
std::string grid_pgm(std::span<const double> normalized, int width, int height);

}  // namespace bbcirl
