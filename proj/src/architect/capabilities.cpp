#include "weave/architect/capabilities.hpp"

#include <algorithm>
#include <cstdlib>

#include "weave/util/file.hpp"
#include "weave/util/text.hpp"

namespace weave::architect {

bool CapabilitiesDoc::offers_handler(std::string_view name) const {
    return std::find(tool_handlers.begin(), tool_handlers.end(), name) != tool_handlers.end();
}

CapabilitiesDoc parse_capabilities(std::string text) {
    CapabilitiesDoc doc;
    bool in_handlers = false;
    for (auto raw : text::split_lines(text)) {
        auto line = text::trim(raw);
        if (doc.version.empty() && line.starts_with("Version:")) {
            doc.version = std::string(text::trim(line.substr(8)));
        }
        if (line.starts_with("#")) {
            in_handlers = text::to_lower_ascii(text::trim(line.substr(line.find_first_not_of('#')))) == "tool handlers";
            continue;
        }
        if (in_handlers && line.starts_with("- `")) {
            auto end = line.find('`', 3);
            if (end != std::string_view::npos) doc.tool_handlers.emplace_back(line.substr(3, end - 3));
        }
    }
    if (text::trim(text).empty()) throw AssetError("capabilities document is empty");
    if (doc.version.empty()) throw AssetError("capabilities document has no `Version:` line");
    doc.text = std::move(text);
    return doc;
}

CapabilitiesDoc load_capabilities(const std::filesystem::path& path) {
    try {
        return parse_capabilities(read_file(path));
    } catch (const AssetError& e) {
        throw AssetError(path.string() + ": " + e.what());
    }
}

std::filesystem::path default_asset_dir() {
    if (const char* env = std::getenv("WEAVE_ASSET_DIR"); env && *env) return env;
#ifdef WEAVE_ASSET_DIR
    return WEAVE_ASSET_DIR;
#else
    return "assets";
#endif
}

}  // namespace weave::architect
