#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace asfm {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace asfm
