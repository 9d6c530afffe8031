#include "weave/llm/gateway.hpp"

#include <cmath>
#include <thread>

namespace weave::llm {
namespace {

void check_request(const LlmProfile& profile, const std::vector<ChatMessage>& messages) {
    auto problems = profile_problems(profile);
    if (!problems.empty()) {
        throw RequestError("invalid profile: " + problems.front().second);
    }
    if (messages.empty()) {
        throw RequestError("chat request has no messages");
    }
    if (messages.front().role != Role::system && messages.front().role != Role::user) {
        throw RequestError("first chat message must have role system or user");
    }
    for (const auto& m : messages) {
        if ((m.role == Role::system || m.role == Role::user) && m.content.empty()) {
            throw RequestError("empty " + std::string(to_string(m.role)) + " message");
        }
    }
}

std::size_t estimate_prompt_tokens(const std::vector<ChatMessage>& messages) {
    std::size_t chars = 0;
    for (const auto& m : messages) chars += m.content.size();
    return (chars + 3) / 4;
}

}  // namespace

std::chrono::milliseconds backoff_cap(const RetryPolicy& policy, int retry_index) {
    double cap = static_cast<double>(policy.base.count()) * std::pow(policy.factor, retry_index);
    return std::chrono::milliseconds(static_cast<long long>(cap));
}

Gateway::Gateway(std::shared_ptr<ChatBackend> backend, RetryPolicy policy, Sleeper sleeper, const Clock& clock)
    : backend_(std::move(backend)),
      policy_(policy),
      sleeper_(std::move(sleeper)),
      clock_(clock),
      rng_(policy.jitter_seed) {
    if (!backend_) throw std::invalid_argument("Gateway requires a backend");
    if (!sleeper_) {
        sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }
}

std::chrono::milliseconds Gateway::draw_delay(int retry_index) {
    auto cap = backoff_cap(policy_, retry_index).count();
    std::lock_guard lock(rng_mutex_);
    std::uniform_int_distribution<long long> dist(0, cap);
    return std::chrono::milliseconds(dist(rng_));
}

ChatResponse Gateway::complete(const LlmProfile& profile, const std::vector<ChatMessage>& messages) {
    check_request(profile, messages);
    ++calls_;

    const auto started = clock_.now();
    const int max_attempts = profile.max_retries + 1;
    std::chrono::milliseconds slept{0};
    for (int attempt = 1;; ++attempt) {
        ++attempts_;
        try {
            RawCompletion raw = backend_->send(profile, messages);
            ChatResponse response;
            response.content = std::move(raw.content);
            response.tokens_estimated = !raw.prompt_tokens || !raw.completion_tokens;
            response.prompt_tokens = raw.prompt_tokens.value_or(estimate_prompt_tokens(messages));
            response.completion_tokens = raw.completion_tokens.value_or(estimate_tokens(response.content));
            response.attempts = attempt;
            response.backoff = slept;
            response.latency = elapsed(clock_, started);
            return response;
        } catch (const TransientError& e) {
            if (attempt >= max_attempts) {
                throw RetriesExhausted(attempt, e.what());
            }
            auto delay = draw_delay(attempt - 1);
            slept += delay;
            sleeper_(delay);
        }
    }
}

}  // namespace weave::llm
