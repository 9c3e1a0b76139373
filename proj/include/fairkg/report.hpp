#pragma once

// Byte-stable output helpers shared by every report writer.

#include <filesystem>
#include <string>

namespace fairkg {

/// printf "%.6g"; non-finite values print as "nan", "inf" or "-inf".
std::string format_number(double value);

/// `value` rounded to 6 significant digits.
double round6(double value);

/// Writes `content` to a sibling temporary file and renames it over `path`.
/// Throws Error when the file cannot be written.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// FNV-1a 64-bit digest as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace fairkg
