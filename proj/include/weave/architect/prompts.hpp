#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace weave::architect {

/// Replaces every `{{name}}` with vars[name]. A placeholder without a value is an
/// AssetError, so template and code cannot drift apart silently.
std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& vars);

/// Stage prompt templates read from `<asset_dir>/prompts/<name>.txt`.
class PromptLibrary {
public:
    explicit PromptLibrary(std::filesystem::path asset_dir);

    const std::string& get(const std::string& name) const;
    std::string render(const std::string& name, const std::map<std::string, std::string>& vars) const;

private:
    std::filesystem::path dir_;
    mutable std::map<std::string, std::string> cache_;
};

}  // namespace weave::architect
