#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "weave/llm/types.hpp"
#include "weave/util/clock.hpp"

namespace weave::llm {

/// What a backend returns for one attempt. Token counts are absent when the
/// backend does not report usage.
struct RawCompletion {
    std::string content;
    std::optional<std::size_t> prompt_tokens;
    std::optional<std::size_t> completion_tokens;
};

/// One transport to a chat model. Implementations throw TransientError for
/// failures worth retrying and AuthError / RequestError / TranscriptError otherwise.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual RawCompletion send(const LlmProfile& profile, std::span<const ChatMessage> messages) = 0;
    /// Responses depend on the order of calls (transcript replay). Callers that
    /// want reproducible output must then issue calls from one thread.
    virtual bool order_sensitive() const { return false; }
};

struct RetryPolicy {
    std::chrono::milliseconds base{1000};
    double factor = 2.0;
    std::uint64_t jitter_seed = 0x5eed;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// Upper bound of the full-jitter delay before retry number `retry_index` (0-based).
std::chrono::milliseconds backoff_cap(const RetryPolicy& policy, int retry_index);

/// Uniform chat-completion entry point shared by every stage. Thread-safe.
class Gateway {
public:
    explicit Gateway(std::shared_ptr<ChatBackend> backend, RetryPolicy policy = {}, Sleeper sleeper = {},
                     const Clock& clock = system_clock());

    /// Sends `messages`, retrying transient failures with exponential backoff and
    /// full jitter, at most profile.max_retries times.
    ChatResponse complete(const LlmProfile& profile, const std::vector<ChatMessage>& messages);

    std::size_t call_count() const noexcept { return calls_.load(); }
    std::size_t attempt_count() const noexcept { return attempts_.load(); }
    bool order_sensitive() const { return backend_->order_sensitive(); }
    const Clock& clock() const noexcept { return clock_; }

private:
    std::chrono::milliseconds draw_delay(int retry_index);

    std::shared_ptr<ChatBackend> backend_;
    RetryPolicy policy_;
    Sleeper sleeper_;
    const Clock& clock_;
    std::mutex rng_mutex_;
    std::mt19937_64 rng_;
    std::atomic<std::size_t> calls_{0};
    std::atomic<std::size_t> attempts_{0};
};

}  // namespace weave::llm
