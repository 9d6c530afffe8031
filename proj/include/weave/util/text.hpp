#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace weave::text {

std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
/// Replaces every run of ASCII whitespace with a single space.
std::string collapse_whitespace(std::string_view s);
std::vector<std::string_view> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
/// At most `max_chars` bytes of `s`, cut on a UTF-8 boundary, with "..." appended when cut.
std::string truncate(std::string_view s, std::size_t max_chars);
bool contains(std::string_view haystack, std::string_view needle);

/// A ``` fenced region. `info` is the text after the opening fence, trimmed.
struct FencedBlock {
    std::string info;
    std::string body;
    std::size_t line = 0;  // 1-based line of the opening fence
};

/// All fenced blocks in document order. An unterminated fence runs to end of text.
std::vector<FencedBlock> fenced_blocks(std::string_view s);

}  // namespace weave::text
