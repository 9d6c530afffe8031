#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace weave::eval {

struct QaPair {
    std::string id;
    std::string question;
    std::string answer;  // expected

    bool operator==(const QaPair&) const = default;
};

using Dataset = std::vector<QaPair>;

class DatasetError : public std::runtime_error {
public:
    DatasetError(std::size_t line, std::string detail, const std::string& source = {})
        : std::runtime_error((source.empty() ? "" : source + ": ") + "line " + std::to_string(line) + ": " + detail),
          line_(line),
          detail_(std::move(detail)) {}
    std::size_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::string detail_;
};

/// JSON Lines, one {"id","question","answer"} object per line, order kept.
/// Blank lines are skipped but still counted for error line numbers. Numeric
/// ids are accepted and converted to their decimal text.
Dataset parse_dataset(std::string_view jsonl);
Dataset load_dataset(const std::filesystem::path& path);
std::string dump_dataset(const Dataset& dataset);

}  // namespace weave::eval
