#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "weave/llm/gateway.hpp"

namespace weave::llm {

/// Request body for POST {base_url}/chat/completions.
nlohmann::json chat_request_body(const LlmProfile& profile, std::span<const ChatMessage> messages);

/// OpenAI-compatible chat-completions client (no streaming, no function calling).
class OpenAiBackend final : public ChatBackend {
public:
    struct Options {
        std::optional<std::string> api_key;        // LLM_API_KEY
        std::optional<std::string> base_url;       // LLM_BASE_URL, wins over the profile
    };

    static constexpr const char* kDefaultBaseUrl = "https://api.openai.com/v1";

    /// Reads LLM_API_KEY and LLM_BASE_URL.
    static Options options_from_environment();

    explicit OpenAiBackend(Options options) : options_(std::move(options)) {}

    RawCompletion send(const LlmProfile& profile, std::span<const ChatMessage> messages) override;

private:
    Options options_;
};

}  // namespace weave::llm
