#include "weave/llm/transcript.hpp"

#include <yaml-cpp/yaml.h>

#include "weave/util/text.hpp"

namespace weave::llm {
namespace {

std::string entry_label(std::size_t index) {
    return "transcript entry " + std::to_string(index);
}

std::string scalar(const YAML::Node& node, std::size_t index, const char* key) {
    if (!node.IsScalar()) {
        throw TranscriptFormatError(entry_label(index) + ": `" + key + "` must be a string");
    }
    return node.Scalar();
}

TranscriptEntry parse_entry(const YAML::Node& node, std::size_t index) {
    if (!node.IsMap()) {
        throw TranscriptFormatError(entry_label(index) + ": expected a mapping");
    }
    TranscriptEntry entry;
    bool has_response = false;
    for (const auto& kv : node) {
        auto key = kv.first.as<std::string>();
        if (key == "match") {
            auto kind = scalar(kv.second, index, "match");
            if (kind == "any") {
                entry.match = TranscriptEntry::Match::any;
            } else if (kind == "contains") {
                entry.match = TranscriptEntry::Match::contains;
            } else {
                throw TranscriptFormatError(entry_label(index) + ": unknown matcher kind `" + kind + "`");
            }
        } else if (key == "text") {
            entry.text = scalar(kv.second, index, "text");
        } else if (key == "response") {
            entry.response = kv.second.IsNull() ? std::string() : scalar(kv.second, index, "response");
            has_response = true;
        } else if (key == "error") {
            auto kind = scalar(kv.second, index, "error");
            if (kind == "transient") {
                entry.failure = TranscriptEntry::Failure::transient;
            } else if (kind == "auth") {
                entry.failure = TranscriptEntry::Failure::auth;
            } else {
                throw TranscriptFormatError(entry_label(index) + ": unknown error kind `" + kind + "`");
            }
        } else {
            throw TranscriptFormatError(entry_label(index) + ": unknown key `" + key + "`");
        }
    }
    if (entry.match == TranscriptEntry::Match::contains && entry.text.empty()) {
        throw TranscriptFormatError(entry_label(index) + ": `contains` matcher needs non-empty `text`");
    }
    if (has_response == entry.failure.has_value()) {
        throw TranscriptFormatError(entry_label(index) + ": exactly one of `response` or `error` is required");
    }
    return entry;
}

}  // namespace

const TranscriptEntry& Transcript::serve(std::string_view request) {
    if (cursor_ >= entries_.size()) {
        throw TranscriptError("transcript exhausted after " + std::to_string(entries_.size()) + " entries");
    }
    const auto& entry = entries_[cursor_];
    if (entry.match == TranscriptEntry::Match::contains && !text::contains(request, entry.text)) {
        throw TranscriptError(entry_label(cursor_) + " expects a request containing \"" +
                              text::truncate(entry.text, 80) + "\"");
    }
    ++cursor_;
    return entry;
}

Transcript load_transcript(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw TranscriptFormatError(std::string("transcript is not valid YAML: ") + e.what());
    }
    YAML::Node list = root;
    if (root.IsMap()) {
        if (root.size() != 1 || !root["entries"]) {
            throw TranscriptFormatError("transcript map must contain only `entries`");
        }
        list = root["entries"];
    }
    std::vector<TranscriptEntry> entries;
    if (list.IsNull()) return Transcript(std::move(entries));
    if (!list.IsSequence()) {
        throw TranscriptFormatError("transcript must be a list of entries");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
        entries.push_back(parse_entry(list[i], i));
    }
    return Transcript(std::move(entries));
}

std::string dump_transcript(const Transcript& transcript) {
    YAML::Emitter out;
    out << YAML::BeginMap << YAML::Key << "entries" << YAML::Value << YAML::BeginSeq;
    for (const auto& e : transcript.entries()) {
        out << YAML::BeginMap;
        out << YAML::Key << "match" << YAML::Value
            << (e.match == TranscriptEntry::Match::any ? "any" : "contains");
        if (e.match == TranscriptEntry::Match::contains) {
            out << YAML::Key << "text" << YAML::Value << YAML::DoubleQuoted << e.text;
        }
        if (e.failure) {
            out << YAML::Key << "error" << YAML::Value
                << (*e.failure == TranscriptEntry::Failure::transient ? "transient" : "auth");
        } else {
            out << YAML::Key << "response" << YAML::Value << YAML::DoubleQuoted << e.response;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

RawCompletion ScriptedBackend::send(const LlmProfile&, std::span<const ChatMessage> messages) {
    std::string request;
    for (const auto& m : messages) {
        request.append(m.content);
        request.push_back('\n');
    }
    std::lock_guard lock(mutex_);
    const auto& entry = transcript_.serve(request);
    if (entry.failure == TranscriptEntry::Failure::transient) {
        throw TransientError("scripted transient failure (entry " + std::to_string(transcript_.cursor() - 1) + ")");
    }
    if (entry.failure == TranscriptEntry::Failure::auth) {
        throw AuthError("scripted authentication failure");
    }
    return RawCompletion{entry.response, std::nullopt, std::nullopt};
}

std::size_t ScriptedBackend::served() const {
    std::lock_guard lock(mutex_);
    return transcript_.cursor();
}

std::size_t ScriptedBackend::remaining() const {
    std::lock_guard lock(mutex_);
    return transcript_.remaining();
}

}  // namespace weave::llm
