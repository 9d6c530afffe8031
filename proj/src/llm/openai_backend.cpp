#include "weave/llm/openai_backend.hpp"

#include <httplib.h>

#include <cstdlib>
#include <regex>

namespace weave::llm {
namespace {

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;    // prefix without trailing slash
};

Endpoint split_url(const std::string& url) {
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(url, m, re)) {
        throw RequestError("invalid base_url: " + url);
    }
    Endpoint ep{m[1].str(), m[2].matched ? m[2].str() : std::string()};
    while (!ep.path.empty() && ep.path.back() == '/') ep.path.pop_back();
    return ep;
}

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
}

std::optional<std::size_t> usage_field(const nlohmann::json& body, const char* key) {
    auto usage = body.find("usage");
    if (usage == body.end() || !usage->is_object()) return std::nullopt;
    auto v = usage->find(key);
    if (v == usage->end() || !v->is_number_unsigned()) return std::nullopt;
    return v->get<std::size_t>();
}

}  // namespace

nlohmann::json chat_request_body(const LlmProfile& profile, std::span<const ChatMessage> messages) {
    nlohmann::json wire = nlohmann::json::array();
    for (const auto& m : messages) {
        // Tool results travel as plain user turns; the function-calling wire format is not used.
        auto role = m.role == Role::tool ? Role::user : m.role;
        wire.push_back({{"role", to_string(role)}, {"content", m.content}});
    }
    return {
        {"model", profile.model_id},
        {"messages", std::move(wire)},
        {"temperature", profile.temperature},
        {"top_p", profile.top_p},
    };
}

OpenAiBackend::Options OpenAiBackend::options_from_environment() {
    return Options{env("LLM_API_KEY"), env("LLM_BASE_URL")};
}

RawCompletion OpenAiBackend::send(const LlmProfile& profile, std::span<const ChatMessage> messages) {
    std::string base = options_.base_url.value_or(profile.base_url.value_or(kDefaultBaseUrl));
    auto endpoint = split_url(base);

    httplib::Client client(endpoint.origin);
    const auto timeout = profile.timeout;
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers headers;
    if (options_.api_key) {
        headers.emplace("Authorization", "Bearer " + *options_.api_key);
    }

    auto body = chat_request_body(profile, messages).dump();
    auto res = client.Post(endpoint.path + "/chat/completions", headers, body, "application/json");
    if (!res) {
        throw TransientError("transport error: " + httplib::to_string(res.error()));
    }
    const int status = res->status;
    if (status == 401 || status == 403) {
        throw AuthError("endpoint rejected credentials (HTTP " + std::to_string(status) + ")");
    }
    if (status == 408 || status == 429 || status >= 500) {
        throw TransientError("HTTP " + std::to_string(status));
    }
    if (status < 200 || status >= 300) {
        throw RequestError("HTTP " + std::to_string(status) + ": " + res->body.substr(0, 300));
    }

    nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) {
        throw TransientError("response body is not JSON");
    }
    try {
        const auto& message = parsed.at("choices").at(0).at("message");
        RawCompletion out;
        out.content = message.at("content").is_null() ? std::string() : message.at("content").get<std::string>();
        out.prompt_tokens = usage_field(parsed, "prompt_tokens");
        out.completion_tokens = usage_field(parsed, "completion_tokens");
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw TransientError(std::string("unexpected response shape: ") + e.what());
    }
}

}  // namespace weave::llm
