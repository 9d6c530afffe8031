#include "weave/architect/prompts.hpp"

#include "weave/architect/capabilities.hpp"
#include "weave/util/file.hpp"
#include "weave/util/text.hpp"

namespace weave::architect {

std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& vars) {
    std::string out;
    std::size_t pos = 0;
    while (true) {
        auto open = tmpl.find("{{", pos);
        if (open == std::string_view::npos) break;
        auto close = tmpl.find("}}", open + 2);
        if (close == std::string_view::npos) break;
        out.append(tmpl.substr(pos, open - pos));
        std::string name(text::trim(tmpl.substr(open + 2, close - open - 2)));
        auto it = vars.find(name);
        if (it == vars.end()) throw AssetError("template placeholder `" + name + "` has no value");
        out += it->second;
        pos = close + 2;
    }
    out.append(tmpl.substr(pos));
    return out;
}

PromptLibrary::PromptLibrary(std::filesystem::path asset_dir) : dir_(std::move(asset_dir)) {}

const std::string& PromptLibrary::get(const std::string& name) const {
    auto it = cache_.find(name);
    if (it != cache_.end()) return it->second;
    const auto path = dir_ / "prompts" / (name + ".txt");
    try {
        return cache_.emplace(name, read_file(path)).first->second;
    } catch (const FileError& e) {
        throw AssetError(std::string("missing prompt template: ") + e.what());
    }
}

std::string PromptLibrary::render(const std::string& name, const std::map<std::string, std::string>& vars) const {
    return render_template(get(name), vars);
}

}  // namespace weave::architect
