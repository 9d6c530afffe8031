#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace weave::llm {

enum class Provider { openai_compatible, scripted };

std::string_view to_string(Provider p);
std::optional<Provider> provider_from_string(std::string_view s);

/// Model and sampling configuration for one chat-completion backend.
struct LlmProfile {
    Provider provider = Provider::openai_compatible;
    std::string model_id;
    double temperature = 1.0;  // [0, 2]
    double top_p = 1.0;        // (0, 1]
    std::optional<std::string> base_url;
    int max_retries = 3;
    std::chrono::seconds timeout{60};

    bool operator==(const LlmProfile&) const = default;
};

/// Every violated profile invariant, as human-readable messages keyed by field name.
std::vector<std::pair<std::string, std::string>> profile_problems(const LlmProfile& profile);

/// GPT-4.1 as configured for all generated workflows: temperature 1, top_p 1.
LlmProfile gpt41_profile();

enum class Role { system, user, assistant, tool };

std::string_view to_string(Role r);

struct ChatMessage {
    Role role = Role::user;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

struct ChatResponse {
    std::string content;
    std::size_t prompt_tokens = 0;
    std::size_t completion_tokens = 0;
    bool tokens_estimated = false;
    std::chrono::milliseconds latency{0};
    int attempts = 1;
    std::chrono::milliseconds backoff{0};  // total time slept between attempts
};

/// ceil(chars / 4), the fallback when a backend reports no usage.
std::size_t estimate_tokens(std::string_view text);

class LlmError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rate limits, 5xx and timeouts. The gateway retries these.
class TransientError : public LlmError {
public:
    using LlmError::LlmError;
};

class AuthError : public LlmError {
public:
    using LlmError::LlmError;
};

/// Non-retryable request problems (bad profile, 4xx other than auth/rate limit, bad body).
class RequestError : public LlmError {
public:
    using LlmError::LlmError;
};

class RetriesExhausted : public LlmError {
public:
    RetriesExhausted(int attempts, const std::string& last_cause)
        : LlmError("gave up after " + std::to_string(attempts) + " attempts: " + last_cause),
          attempts_(attempts),
          last_cause_(last_cause) {}
    int attempts() const noexcept { return attempts_; }
    const std::string& last_cause() const noexcept { return last_cause_; }

private:
    int attempts_;
    std::string last_cause_;
};

/// Raised by the scripted backend when no transcript entry can serve a request.
class TranscriptError : public LlmError {
public:
    using LlmError::LlmError;
};

}  // namespace weave::llm
