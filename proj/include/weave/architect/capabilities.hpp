#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace weave::architect {

class AssetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Framework summary given to every synthesis stage: workflow schema, directive
/// format, tool handlers, prompt-writing guidance.
struct CapabilitiesDoc {
    std::string version;
    std::string text;
    std::vector<std::string> tool_handlers;  // names under the "Tool handlers" heading

    bool offers_handler(std::string_view name) const;
};

/// Requires a `Version: <stamp>` line and a `## Tool handlers` section whose
/// bullets start with a backquoted handler name.
CapabilitiesDoc parse_capabilities(std::string text);
CapabilitiesDoc load_capabilities(const std::filesystem::path& path);

/// Directory holding `capabilities.md` and `prompts/`. WEAVE_ASSET_DIR in the
/// environment wins over the build-time location.
std::filesystem::path default_asset_dir();

}  // namespace weave::architect
