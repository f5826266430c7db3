#include "qlr/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "qlr/errors.hpp"

namespace qlr {

namespace fs = std::filesystem;

void write_file_atomic(const std::string& path, std::string_view contents) {
    const fs::path target{path};
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) {
            throw ValidationError(path + ": cannot create directory: " + ec.message());
        }
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ValidationError(path + ": cannot open for writing");
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw ValidationError(path + ": write failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ValidationError(path + ": rename failed");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError(path + ": cannot open for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace qlr
