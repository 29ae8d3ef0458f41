#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace cornerlab {

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

/// 64-bit FNV-1a of a string, hex encoded.
std::string fnv1a_hex(const std::string& text);

}  // namespace cornerlab
