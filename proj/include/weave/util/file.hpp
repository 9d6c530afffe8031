#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace weave {

class FileError : public std::runtime_error {
public:
    FileError(const std::filesystem::path& path, const std::string& what)
        : std::runtime_error(path.string() + ": " + what), path_(path) {}
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
/// Writes `contents` verbatim, creating parent directories as needed.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace weave
