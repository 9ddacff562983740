#pragma once

#include <filesystem>
#include <string>

namespace apsel {

/// Writes to `<path>.tmp` and renames over `path`, so readers never see a
/// partial file. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace apsel
