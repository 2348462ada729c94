#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rstar::io {

/// Shortest round-trip decimal representation; "NA" for NaN.
std::string format_double(double value);

/// Formats an optional value, writing "NA" when absent.
std::string format_optional(const std::optional<double>& value);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

/// Quotes a CSV field only when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

std::string_view trim(std::string_view s) noexcept;

} // namespace rstar::io
