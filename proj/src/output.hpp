#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace dispersia::detail {

// %.17g: lossless round trip.
std::string fmt(double v);
std::string hex64(std::uint64_t v);
std::string csv_quote(const std::string& field);

std::string read_file(const std::string& path);
// Creates parent directories as needed.
void write_file(const std::filesystem::path& path, const std::string& body);

}  // namespace dispersia::detail
