#pragma once

#include <string>
#include <string_view>

namespace qlr {

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never see a partial file. Creates missing parent directories.
void write_file_atomic(const std::string& path, std::string_view contents);

std::string read_file(const std::string& path);

}  // namespace qlr
