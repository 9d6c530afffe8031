#pragma once

#include <cstddef>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weave/llm/gateway.hpp"

namespace weave::llm {

class TranscriptFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TranscriptEntry {
    enum class Match { any, contains };
    enum class Failure { transient, auth };

    Match match = Match::any;
    std::string text;                  // required for Match::contains
    std::string response;
    std::optional<Failure> failure;    // injected failure instead of a response

    bool operator==(const TranscriptEntry&) const = default;
};

/// Pre-authored responses consumed strictly in order. The entry under the
/// cursor serves the next request; a `contains` entry only serves a request
/// whose concatenated message contents include its text.
class Transcript {
public:
    Transcript() = default;
    explicit Transcript(std::vector<TranscriptEntry> entries) : entries_(std::move(entries)) {}

    /// Consumes the entry under the cursor for `request`. Throws TranscriptError
    /// when exhausted or when the entry's matcher rejects the request; the cursor
    /// does not move in that case.
    const TranscriptEntry& serve(std::string_view request);

    const std::vector<TranscriptEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t cursor() const noexcept { return cursor_; }
    std::size_t remaining() const noexcept { return entries_.size() - cursor_; }

private:
    std::vector<TranscriptEntry> entries_;
    std::size_t cursor_ = 0;
};

/// Parses a `.transcript.yaml` document (JSON is accepted too): either a bare
/// list of entries or a map with an `entries` list.
Transcript load_transcript(std::string_view text);
std::string dump_transcript(const Transcript& transcript);

/// Deterministic backend replaying a transcript. Calls are serialized, so
/// concurrent callers observe a total order.
class ScriptedBackend final : public ChatBackend {
public:
    explicit ScriptedBackend(Transcript transcript) : transcript_(std::move(transcript)) {}

    RawCompletion send(const LlmProfile& profile, std::span<const ChatMessage> messages) override;
    bool order_sensitive() const override { return true; }

    std::size_t served() const;
    std::size_t remaining() const;

private:
    mutable std::mutex mutex_;
    Transcript transcript_;
};

}  // namespace weave::llm
