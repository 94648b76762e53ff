#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace qpmsynth::cli {

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// SHA-256 of a file's contents; throws Error(io) if unreadable.
std::string sha256_file(const std::filesystem::path& path);

/// UTC timestamp, ISO 8601 to the second.
std::string utc_timestamp();

}  // namespace qpmsynth::cli
