#include "weave/llm/types.hpp"

namespace weave::llm {

std::string_view to_string(Provider p) {
    switch (p) {
        case Provider::openai_compatible: return "openai_compatible";
        case Provider::scripted: return "scripted";
    }
    return "openai_compatible";
}

std::optional<Provider> provider_from_string(std::string_view s) {
    if (s == "openai_compatible") return Provider::openai_compatible;
    if (s == "scripted") return Provider::scripted;
    return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> profile_problems(const LlmProfile& profile) {
    std::vector<std::pair<std::string, std::string>> problems;
    if (!(profile.temperature >= 0.0 && profile.temperature <= 2.0)) {
        problems.emplace_back("temperature", "temperature must lie in [0, 2]");
    }
    if (!(profile.top_p > 0.0 && profile.top_p <= 1.0)) {
        problems.emplace_back("top_p", "top_p must lie in (0, 1]");
    }
    if (profile.provider == Provider::openai_compatible && profile.model_id.empty()) {
        problems.emplace_back("model_id", "model_id is required for openai_compatible profiles");
    }
    if (profile.max_retries < 0 || profile.max_retries > 10) {
        problems.emplace_back("max_retries", "max_retries must lie in [0, 10]");
    }
    if (profile.timeout.count() <= 0) {
        problems.emplace_back("timeout_s", "timeout must be positive");
    }
    return problems;
}

LlmProfile gpt41_profile() {
    LlmProfile p;
    p.provider = Provider::openai_compatible;
    p.model_id = "gpt-4.1-2025-04-14";
    p.temperature = 1.0;
    p.top_p = 1.0;
    return p;
}

std::string_view to_string(Role r) {
    switch (r) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
        case Role::tool: return "tool";
    }
    return "user";
}

std::size_t estimate_tokens(std::string_view text) {
    return (text.size() + 3) / 4;
}

}  // namespace weave::llm
